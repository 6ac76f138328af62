"""Pure-Python integer kernels; the reference the compiled core must match."""


def triangular_upto(n):
    out, t, j = [], 0, 0
    while t <= n:
        out.append(t)
        j += 1
        t += j
    return out


def ball_union(weights, n):
    """c_0..c_n of a disjoint union of balls with integer radii.

    Exact max-plus convolution: a ball of radius a contributes j*a at index
    j(j+1)/2, the index where its capacity reaches j*a.
    """
    tri = triangular_upto(n)
    f = [0] * (n + 1)
    for a in weights:
        g = list(f)
        for k in range(1, n + 1):
            best = g[k]
            for j in range(1, len(tri)):
                t = tri[j]
                if t > k:
                    break
                v = f[k - t] + j * a
                if v > best:
                    best = v
            g[k] = best
        f = g
    return f


def least_degree(k):
    d = 0
    while (d * d + 3 * d) // 2 < k:
        d += 1
    return d


def convex_sequence(B, union, S, K):
    """min over d of d*B - union[(d^2+3d)/2 - k] for k = 0..K.

    ``S`` is the sum of squared radii, so union[m] <= sqrt(2*m*S).  The scan
    over d stops once that bound certifies no later d can win.  Raises
    IndexError when ``union`` is too short to certify the minimum.
    """
    n = len(union)
    out = []
    B2 = B * B
    gap = B2 - S
    d0 = 0
    for k in range(K + 1):
        while (d0 * d0 + 3 * d0) // 2 < k:
            d0 += 1
        d = d0
        best = None
        while True:
            m = (d * d + 3 * d) // 2 - k
            if best is not None:
                lead = d * B - best
                if (gap * (2 * d + 3) ** 2 >= B2 * (9 + 8 * k)
                        and lead > 0 and lead * lead > 2 * m * S):
                    break
                if S == 0:
                    break
            if m >= n:
                raise IndexError(m)
            v = d * B - union[m]
            if best is None or v < best:
                best = v
            d += 1
        out.append(best)
    return out

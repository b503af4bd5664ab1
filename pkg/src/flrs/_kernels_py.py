"""Pure-Python twin of the compiled elimination kernel; same signature and results."""

_LISTS = {}


def _as_list(arr):
    # field tables are long-lived arrays; converting a 729 x 729 add table per call dominated runtime
    key = id(arr)
    hit = _LISTS.get(key)
    if hit is None or hit[0] is not arr:
        hit = _LISTS[key] = (arr, arr.tolist())
    return hit[1]


def rref(M, mode, p, q, n, half, ex, lg, aux, ncols=-1):
    rows, cols = M.shape
    A = M.tolist()
    ex, lg, aux = _as_list(ex), _as_list(lg), _as_list(aux)

    if mode == 3:
        def mul(a, b):
            return a * b % p

        def add(a, b):
            return (a + b) % p

        def neg(a):
            return (p - a) % p

        def inv(a):
            return pow(a, p - 2, p)
    else:
        def mul(a, b):
            return ex[lg[a] + lg[b]] if a and b else 0

        def neg(a):
            return a if (a == 0 or mode == 0) else ex[lg[a] + half]

        def inv(a):
            return ex[n - lg[a]]

        if mode == 0:
            def add(a, b):
                return a ^ b
        elif mode == 1:
            def add(a, b):
                return aux[a * q + b]
        else:
            def add(a, b):
                if a == 0:
                    return b
                if b == 0:
                    return a
                la = lg[a]
                z = aux[(lg[b] - la) % n]
                return 0 if z < 0 else ex[la + z]

    if ncols < 0 or ncols > cols:
        ncols = cols
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= rows:
            break
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        row = A[r]
        if row[c] != 1:
            iv = inv(row[c])
            for j in range(c, cols):
                row[j] = mul(row[j], iv)
        for i in range(rows):
            if i != r and A[i][c]:
                f = neg(A[i][c])
                other = A[i]
                for j in range(c, cols):
                    if row[j]:
                        other[j] = add(other[j], mul(f, row[j]))
        pivots.append(c)
        r += 1
    M[:, :] = A if rows and cols else M
    return pivots

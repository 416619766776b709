"""Pure-Python implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, or when
``CARTAN_LAB_PURE_PYTHON`` is set.  Signatures match the extension exactly.
"""
from math import sqrt

_NAIVE_CUTOFF = 24


def poly_mul_mod(a, b, p):
    """Product of two dense coefficient tuples over F_p (lowest degree first).

    Small inputs use schoolbook convolution; larger ones go through Kronecker
    substitution so the heavy lifting happens in CPython's big-int multiply.
    """
    if not a or not b:
        return ()
    if min(len(a), len(b)) <= _NAIVE_CUTOFF:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return tuple(c % p for c in out)
    # each product coefficient is < min(len) * (p-1)^2
    bound = min(len(a), len(b)) * (p - 1) ** 2 + 1
    width = bound.bit_length()
    pack_a = int.from_bytes(_pack(a, width), "little")
    pack_b = int.from_bytes(_pack(b, width), "little")
    prod = pack_a * pack_b
    mask = (1 << width) - 1
    n_out = len(a) + len(b) - 1
    out = []
    for _ in range(n_out):
        out.append((prod & mask) % p)
        prod >>= width
    return tuple(out)


def _pack(coeffs, width):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc << width) | c
    nbytes = (len(coeffs) * width + 7) // 8
    return acc.to_bytes(nbytes, "little")


def jacobi_eigvalsh(rows, tol, max_sweeps):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, sweeps)``; ``sweeps == -1`` signals that the
    off-diagonal mass did not drop below ``tol`` times the diagonal mass
    within ``max_sweeps`` sweeps.
    """
    n = len(rows)
    a = [list(map(float, r)) for r in rows]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        diag = 0.0
        for i in range(n):
            ai = a[i]
            diag += ai[i] * ai[i]
            for j in range(n):
                if i != j:
                    off += ai[j] * ai[j]
        if off == 0.0 or sqrt(off) < tol * sqrt(diag):
            return [a[i][i] for i in range(n)], sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    ak = a[k]
                    akp = ak[p]
                    akq = ak[q]
                    ak[p] = c * akp - s * akq
                    ak[q] = s * akp + c * akq
                ap = a[p]
                aq = a[q]
                for k in range(n):
                    apk = ap[k]
                    aqk = aq[k]
                    ap[k] = c * apk - s * aqk
                    aq[k] = s * apk + c * aqk
                ap[q] = 0.0
                aq[p] = 0.0
    return [a[i][i] for i in range(n)], -1

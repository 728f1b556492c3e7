"""Pure-numpy fallback with the same surface as the compiled ``_jetcore``."""
import numpy as np


def mul(a, b):
    nx, ny, nt = a.shape
    out = np.zeros_like(a)
    for p, q, r in zip(*np.nonzero(a)):
        out[p:, q:, r:] += a[p, q, r] * b[:nx - p, :ny - q, :nt - r]
    return out


def div(a, b):
    nx, ny, nt = a.shape
    out = np.zeros_like(a)
    b0 = b[0, 0, 0]
    for i in range(nx):
        for j in range(ny):
            for k in range(nt):
                # out[i, j, k] is still zero here, so the (0,0,0) pairing drops out
                s = np.sum(b[i::-1, j::-1, k::-1] * out[:i + 1, :j + 1, :k + 1])
                out[i, j, k] = (a[i, j, k] - s) / b0
    return out


def horner(coefs, h):
    acc = np.zeros_like(h)
    if len(coefs) == 0:
        return acc
    acc[0, 0, 0] = coefs[-1]
    for c in coefs[-2::-1]:
        acc = mul(acc, h)
        acc[0, 0, 0] += c
    return acc

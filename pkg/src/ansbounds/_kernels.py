"""Compiled bulk encode/decode loops.

These mirror the per-step functions in ``tans`` and ``rans``; the test suite
checks bit-identical output between the two.  Bits are accumulated into 32-bit
chunks held in int64 arrays so every intermediate shift stays below 2**63.

Encoders push ``seq`` from its last letter to its first.  Decoders start
reading below bit ``pos``, fill the output in pop order and return a status:
0 ok, 1 bit underflow.
"""

import numpy as np
from numba import njit

MAX_KERNEL_R = 30
MAX_KERNEL_STATE_BITS = 48

_CHUNK = 32
_CHUNK_MASK = (1 << 32) - 1


@njit(cache=True)
def _write(words, nbits, value, width):
    idx = nbits >> 5
    off = nbits & 31
    words[idx] |= (value << off) & _CHUNK_MASK
    if off + width > _CHUNK:
        words[idx + 1] |= value >> (_CHUNK - off)
    return nbits + width


@njit(cache=True)
def _read(words, start, width):
    idx = start >> 5
    off = start & 31
    v = words[idx] >> off
    if off + width > _CHUNK:
        v |= words[idx + 1] << (_CHUNK - off)
    return v & ((np.int64(1) << width) - 1)


@njit(cache=True)
def tans_encode(seq, shift_d, base, next_state, r):
    """``next_state[base[a] + x_hat]`` is ``2**r + shuffle[c_a + x_hat - f_a]``."""
    n = seq.shape[0]
    words = np.zeros((n * (r + 1)) // _CHUNK + 2, dtype=np.int64)
    nbits = 0
    x = np.int64(1) << r
    for i in range(n - 1, -1, -1):
        a = seq[i]
        s = (x + shift_d[a]) >> (r + 1)
        nbits = _write(words, nbits, x & ((np.int64(1) << s) - 1), s)
        x = next_state[base[a] + (x >> s)]
    return x, words, nbits


@njit(cache=True)
def tans_decode(x, words, pos, n_letters, letter, restored_x, nb_bits, r):
    out = np.empty(n_letters, dtype=np.int64)
    mask = (np.int64(1) << r) - 1
    for i in range(n_letters):
        z = x & mask
        out[i] = letter[z]
        s = nb_bits[z]
        if s > pos:
            return out, x, pos, 1
        pos -= s
        x = (restored_x[z] << s) | _read(words, pos, s)
    return out, x, pos, 0


@njit(cache=True)
def rans_encode(seq, freq, cum, shift_d, r, k):
    big_r = r + k
    n = seq.shape[0]
    words = np.zeros((n * (r + 2)) // _CHUNK + 2, dtype=np.int64)
    nbits = 0
    x = np.int64(1) << big_r
    for i in range(n - 1, -1, -1):
        a = seq[i]
        f = freq[a]
        if f == (np.int64(1) << r):
            s = 0
        else:
            s = (x + shift_d[a]) >> (big_r + 1)
        nbits = _write(words, nbits, x & ((np.int64(1) << s) - 1), s)
        y = (x >> s) - (f << k)
        q = np.int64(1) << k
        for j in range(k - 1, -1, -1):
            y0 = y - (f << j)
            neg = y0 >> 63  # all ones when y0 < 0
            q |= ~neg & (np.int64(1) << j)
            y = y0 + (neg & (f << j))
        x = (q << r) + cum[a] + y
    return x, words, nbits


@njit(cache=True)
def rans_decode(x, words, pos, n_letters, freq, cum, r, k):
    big_r = r + k
    lo = np.int64(1) << big_r
    sigma = freq.shape[0]
    out = np.empty(n_letters, dtype=np.int64)
    mask = (np.int64(1) << r) - 1
    for i in range(n_letters):
        z = x & mask
        a_lo = 0
        a_hi = sigma
        while a_hi - a_lo > 1:
            mid = (a_lo + a_hi) >> 1
            if cum[mid] <= z:
                a_lo = mid
            else:
                a_hi = mid
        a = a_lo
        out[i] = a
        y = (x >> r) * freq[a] + z - cum[a]
        s = 0
        while (y << s) < lo:
            s += 1
        if s > pos:
            return out, x, pos, 1
        pos -= s
        x = (y << s) | _read(words, pos, s)
    return out, x, pos, 0

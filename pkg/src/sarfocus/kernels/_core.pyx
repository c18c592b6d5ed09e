# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: table-driven windowed-sinc row resampling and the
sliding lower-median filter. Semantics match ``_fallback`` exactly."""

from cython.parallel cimport prange
from libc.math cimport floor
from libc.stdlib cimport malloc, free


def resample_rows(const double complex[:, ::1] src,
                  const double[:, ::1] pos,
                  const double[:, ::1] table,
                  double complex[:, ::1] out,
                  bint zero_outside,
                  int num_threads=1):
    cdef Py_ssize_t rows = src.shape[0]
    cdef Py_ssize_t ncol = src.shape[1]
    cdef Py_ssize_t nout = pos.shape[1]
    cdef Py_ssize_t nphase = table.shape[0] - 1
    cdef Py_ssize_t taps = table.shape[1]
    cdef Py_ssize_t half = taps // 2
    cdef Py_ssize_t i, j, k, base, idx, ph
    cdef double p, fl
    cdef double complex acc
    if num_threads < 1:
        num_threads = 1
    for i in prange(rows, nogil=True, num_threads=num_threads, schedule="static"):
        for j in range(nout):
            p = pos[i, j]
            if zero_outside and (p < 0.0 or p > ncol - 1):
                out[i, j] = 0
                continue
            fl = floor(p)
            base = <Py_ssize_t>fl
            ph = <Py_ssize_t>((p - fl) * nphase + 0.5)
            acc = 0
            for k in range(taps):
                idx = base - half + 1 + k
                if idx < 0:
                    idx = 0
                elif idx >= ncol:
                    idx = ncol - 1
                acc = acc + src[i, idx] * table[ph, k]
            out[i, j] = acc


cdef inline void _insertion_sort(double* a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double x
    for i in range(1, n):
        x = a[i]
        j = i
        while j > 0 and a[j - 1] > x:
            a[j] = a[j - 1]
            j -= 1
        a[j] = x


cdef inline void _slide(const double* w, double* w2, Py_ssize_t k,
                        const double* leave, const double* enter, Py_ssize_t m) noexcept nogil:
    # w2 = (w minus leave) merged with enter; all inputs sorted
    cdef Py_ssize_t p = 0, q = 0, r = 0, t = 0
    cdef double x
    while p < k:
        x = w[p]
        p += 1
        if q < m and x == leave[q]:
            q += 1
            continue
        while r < m and enter[r] < x:
            w2[t] = enter[r]
            t += 1
            r += 1
        w2[t] = x
        t += 1
    while r < m:
        w2[t] = enter[r]
        t += 1
        r += 1


def median_filter(const double[:, ::1] padded, int m, int n,
                  double[:, ::1] out, int num_threads=1):
    """``out[i, j]`` = lower median of ``padded[i:i+m, j:j+n]``.

    For each output row the ``m``-long column segments are sorted once;
    the sorted window then slides right by dropping one sorted segment
    and merging in the next.
    """
    cdef Py_ssize_t rows = out.shape[0]
    cdef Py_ssize_t cols = out.shape[1]
    cdef Py_ssize_t pcols = padded.shape[1]
    cdef Py_ssize_t count = m * n
    cdef Py_ssize_t kth = (count - 1) // 2
    cdef Py_ssize_t i, j, a, c
    cdef double* seg
    cdef double* w
    cdef double* w2
    cdef double* tmp
    if num_threads < 1:
        num_threads = 1
    with nogil:
        for i in prange(rows, num_threads=num_threads, schedule="static"):
            seg = <double*>malloc((pcols * m + 2 * count) * sizeof(double))
            w = seg + pcols * m
            w2 = w + count
            for c in range(pcols):
                for a in range(m):
                    seg[c * m + a] = padded[i + a, c]
                _insertion_sort(seg + c * m, m)
            for c in range(count):
                w[c] = seg[c]
            _insertion_sort(w, count)
            out[i, 0] = w[kth]
            for j in range(1, cols):
                _slide(w, w2, count, seg + (j - 1) * m, seg + (j + n - 1) * m, m)
                tmp = w
                w = w2
                w2 = tmp
                out[i, j] = w[kth]
            free(seg)

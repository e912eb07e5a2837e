# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled batch event walk; contract documented in _pykernel."""


def run_events(const int[:, ::1] table, const int[::1] ids, int start,
               bint strict):
    cdef Py_ssize_t pos
    cdef Py_ssize_t n = ids.shape[0]
    cdef int state = start
    cdef int event, target
    for pos in range(n):
        event = ids[pos]
        if event < 0:
            if strict:
                return state, pos
            continue
        target = table[state, event]
        if target < 0:
            return state, pos
        state = target
    return state, -1

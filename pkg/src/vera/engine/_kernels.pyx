# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernels.

Draw-for-draw identical to _kernels_py: the same splitmix64 counter stream
consumed in the same order, so trajectories are bit-identical across
backends.  See _kernels_py for the draw-order contract.
"""
import numpy as np

from libc.math cimport exp, pow

BACKEND = "cython"

cdef extern from *:
    """
    #include <stdint.h>
    static inline double vera_u01(uint64_t seed, uint64_t counter) {
        /* splitmix64 finalizer over state seed + (counter+1)*GOLDEN */
        uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z = z ^ (z >> 31);
        return (double)(z >> 11) * (1.0 / 9007199254740992.0);
    }
    """
    double vera_u01(unsigned long long seed, unsigned long long counter) nogil


def sir_chain(long long s0, long long i0, long long r0, double contacts,
              double p_eff, double gamma, long long horizon,
              unsigned long long seed):
    cdef long long n = s0 + i0 + r0
    S_arr = np.empty(horizon + 1, dtype=np.int64)
    I_arr = np.empty(horizon + 1, dtype=np.int64)
    R_arr = np.empty(horizon + 1, dtype=np.int64)
    cdef long long[::1] S = S_arr
    cdef long long[::1] I = I_arr
    cdef long long[::1] R = R_arr
    S[0] = s0
    I[0] = i0
    R[0] = r0
    cdef double p_rec = 1.0 - exp(-gamma)
    cdef unsigned long long ctr = 0
    cdef long long t, j, s, i, r, new_inf, new_rec
    cdef double p_inf
    with nogil:
        for t in range(horizon):
            s = S[t]
            i = I[t]
            r = R[t]
            if n > 1:
                p_inf = 1.0 - pow(1.0 - p_eff * (<double> i) / (<double> (n - 1)), contacts)
            else:
                p_inf = 0.0
            new_inf = 0
            for j in range(s):
                if vera_u01(seed, ctr + <unsigned long long> j) < p_inf:
                    new_inf += 1
            ctr += <unsigned long long> s
            new_rec = 0
            for j in range(i):
                if vera_u01(seed, ctr + <unsigned long long> j) < p_rec:
                    new_rec += 1
            ctr += <unsigned long long> i
            S[t + 1] = s - new_inf
            I[t + 1] = i + new_inf - new_rec
            R[t + 1] = r + new_rec
    return S_arr, I_arr, R_arr


def phenomenon_chain(long long n0, long long population,
                     long long transmission_count, double success,
                     long long onset, long long interval, long long duration,
                     long long horizon, unsigned long long seed):
    if duration < 1:
        duration = 1
    ages_arr = np.zeros(duration, dtype=np.int64)
    ages_arr[0] = n0
    active_arr = np.empty(horizon + 1, dtype=np.int64)
    cum_arr = np.empty(horizon + 1, dtype=np.int64)
    cdef long long[::1] ages = ages_arr
    cdef long long[::1] active = active_arr
    cdef long long[::1] cumulative = cum_arr
    cdef long long susceptible = population - n0
    if susceptible < 0:
        susceptible = 0
    active[0] = n0
    cumulative[0] = n0
    cdef unsigned long long ctr = 0
    cdef long long t, age, j, transmitting, attempts, births, total
    cdef double threshold
    with nogil:
        for t in range(horizon):
            transmitting = 0
            if interval > 0:
                age = onset
                while age < duration:
                    transmitting += ages[age]
                    age += interval
            attempts = transmitting * transmission_count
            if population > 0:
                # parenthesized to round exactly like the NumPy backend
                threshold = success * ((<double> susceptible) / (<double> population))
            else:
                threshold = 0.0
            births = 0
            for j in range(attempts):
                if vera_u01(seed, ctr + <unsigned long long> j) < threshold:
                    births += 1
            ctr += <unsigned long long> attempts
            if births > susceptible:
                births = susceptible
            susceptible -= births
            for age in range(duration - 1, 0, -1):
                ages[age] = ages[age - 1]
            ages[0] = births
            total = 0
            for age in range(duration):
                total += ages[age]
            active[t + 1] = total
            cumulative[t + 1] = cumulative[t] + births
    return active_arr, cum_arr

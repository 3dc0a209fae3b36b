"""Numba kernels for the simulated-annealing backend.

Per-read randomness comes from an inlined xoshiro256+ generator whose state
is seeded from the splitmix64 sequence at ``seed + 4 * read_index * gamma``
(gamma the canonical splitmix64 increment), so every read owns a disjoint,
scheduling-independent stream.  Uniform doubles take the top 53 bits;
shuffle indices use the floor(u * k) bound.

The sweep loop keeps the local field of every spin cached and updates
neighbors only on accepted flips; rejected proposals cost O(1).  Uphill
moves with beta * dE > 44 are rejected without consuming randomness
(acceptance probability < 8e-20).

The hot loop must stay in its own function: merging it with the setup code
pushes LLVM over a register-spill cliff (measured ~5x slowdown).
"""

import numpy as np
from numba import njit

U64 = np.uint64
_GAMMA = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0


@njit(nogil=True, cache=True)
def init_read(state, spins, perm, seed, read_index):
    """Seed the read's generator, draw uniform initial spins, reset perm."""
    base = U64(seed) + U64(4 * read_index) * _GAMMA
    z = base + _GAMMA
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    s0 = z ^ (z >> U64(31))
    z = base + U64(2) * _GAMMA
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    s1 = z ^ (z >> U64(31))
    z = base + U64(3) * _GAMMA
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    s2 = z ^ (z >> U64(31))
    z = base + U64(4) * _GAMMA
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    s3 = z ^ (z >> U64(31))
    if s0 == U64(0) and s1 == U64(0) and s2 == U64(0) and s3 == U64(0):
        s0 = U64(1)

    n = spins.shape[0]
    for i in range(n):
        out = s0 + s3
        t = s1 << U64(17)
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = (s3 << U64(45)) | (s3 >> U64(19))
        u = (out >> U64(11)) * _INV53
        spins[i] = 1.0 if u < 0.5 else -1.0
        perm[i] = i
    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3


@njit(nogil=True, cache=True)
def local_fields(indptr, indices, weights, h, spins, fields):
    """fields[i] = h[i] + sum_j J_ij s_j, and the full energy of `spins`."""
    n = spins.shape[0]
    energy = 0.0
    for i in range(n):
        f = h[i]
        for ptr in range(indptr[i], indptr[i + 1]):
            f += weights[ptr] * spins[indices[ptr]]
        fields[i] = f
        energy += 0.5 * (f + h[i]) * spins[i]
    return energy


@njit(nogil=True, cache=True)
def sweep_phase(indptr, indices, weights, betas, spins, fields, perm, state):
    """Metropolis sweeps over a random permutation per sweep.

    Mutates spins/fields/perm/state in place; returns the summed energy
    change from accepted flips.
    """
    s0 = state[0]
    s1 = state[1]
    s2 = state[2]
    s3 = state[3]
    n = spins.shape[0]
    num_sweeps = betas.shape[0]
    energy_delta = 0.0
    for sweep in range(num_sweeps):
        beta = betas[sweep]
        for i in range(n - 1, 0, -1):
            out = s0 + s3
            t = s1 << U64(17)
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = (s3 << U64(45)) | (s3 >> U64(19))
            u = (out >> U64(11)) * _INV53
            j = np.int64(u * (i + 1))
            tmp = perm[i]
            perm[i] = perm[j]
            perm[j] = tmp
        for t_ in range(n):
            i = perm[t_]
            delta = -2.0 * spins[i] * fields[i]
            accept = False
            if delta <= 0.0:
                accept = True
            else:
                x = beta * delta
                if x <= 44.0:
                    out = s0 + s3
                    t = s1 << U64(17)
                    s2 ^= s0
                    s3 ^= s1
                    s1 ^= s2
                    s0 ^= s3
                    s2 ^= t
                    s3 = (s3 << U64(45)) | (s3 >> U64(19))
                    u = (out >> U64(11)) * _INV53
                    if u < np.exp(-x):
                        accept = True
            if accept:
                s_new = -spins[i]
                spins[i] = s_new
                energy_delta += delta
                two_s = 2.0 * s_new
                for ptr in range(indptr[i], indptr[i + 1]):
                    fields[indices[ptr]] += two_s * weights[ptr]
    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3
    return energy_delta

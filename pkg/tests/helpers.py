"""Independent oracles and small utilities shared across the test modules.

Everything here is deliberately written against the definitions, not the
library code paths it is used to check.
"""

import itertools

from multiform.linalg import FVector


def permutation_sign(perm):
    """Sign via cycle decomposition."""
    visited = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if visited[start]:
            continue
        length = 0
        j = start
        while not visited[j]:
            visited[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def evaluate_bruteforce(form, vectors):
    """Full multilinear expansion over all index tuples with explicit
    permutation signs; the alternating extension computed the slow way."""
    total = 0
    for tup in itertools.product(range(form.d), repeat=form.n):
        if len(set(tup)) < form.n:
            continue
        key = tuple(sorted(tup))
        c = form.coeff(key)
        if not c:
            continue
        order = sorted(range(form.n), key=lambda i: tup[i])
        prod = 1
        for slot, col in enumerate(tup):
            prod *= vectors[slot].coords[col]
        total += permutation_sign(order) * c * prod
    return total % form.p


def random_vector(rng, p, d):
    return FVector(p, tuple(rng.randrange(p) for _ in range(d)))


def random_nonzero_vector(rng, p, d):
    v = random_vector(rng, p, d)
    while v.is_zero():
        v = random_vector(rng, p, d)
    return v

from functools import lru_cache

from orbipres.surface import ConeDisk, enumerate_flip_graph


@lru_cache(maxsize=None)
def triangulations(n, d):
    return tuple(enumerate_flip_graph(ConeDisk(n, d)).triangulations)


def all_cases(ns, ds):
    return [(T, k) for n in ns for d in ds for T in triangulations(n, d) for k in T.slots()]

"""Shared loaders and independent brute-force helpers for the test suite."""

from __future__ import annotations

import itertools
from functools import lru_cache
from importlib import resources

from shuffleops.dsl import OpsDocument, parse_document
from shuffleops.presentation import Presentation
from shuffleops.shuffle_tree import internal_paths, is_leaf, standardize, subtree
from shuffleops.symmetrize import ShufflePresentation, present_shuffle

BUNDLED = sorted(
    p.name[:-4] for p in (resources.files("shuffleops") / "data").iterdir() if p.name.endswith(".ops")
)


@lru_cache(maxsize=None)
def document(name: str) -> OpsDocument:
    text = (resources.files("shuffleops") / "data" / f"{name}.ops").read_text(encoding="utf-8")
    return parse_document(text)


def presentation(name: str, point=None) -> Presentation:
    doc = document(name)
    if doc.is_family and point is None:
        point = doc.sample_points()[0]
    return doc.presentation(point)


@lru_cache(maxsize=None)
def _shuffle_cached(name: str, point) -> ShufflePresentation:
    return present_shuffle(presentation(name, point))


def shuffle(name: str, point=None) -> ShufflePresentation:
    return _shuffle_cached(name, tuple(point) if point is not None else None)


def regression_cases() -> list:
    """Every bundled presentation, with each sample point of each family."""
    out = []
    for name in BUNDLED:
        doc = document(name)
        if doc.is_family:
            out.extend((name, pt) for pt in doc.sample_points())
        else:
            out.append((name, None))
    return out


def case_id(case) -> str:
    name, pt = case
    return name if pt is None else name + "[" + ",".join(str(v) for v in pt) + "]"


# -- independent divisibility: restrict the host to a connected vertex set


def _restriction(host, root_path, vertex_set):
    """The pattern seen at ``vertex_set``; hanging subtrees become their min leaf."""

    def min_leaf(t):
        if is_leaf(t):
            return t
        return min(min_leaf(c) for c in t[1:])

    def build(path):
        t = subtree(host, path)
        if path not in vertex_set:
            return min_leaf(t)
        return (t[0],) + tuple(build(path + (i,)) for i in range(len(t) - 1))

    return standardize(build(root_path))


def _connected_sets(host, root_path, size):
    """Vertex sets of the given size, rooted at ``root_path``, closed upward."""
    results = []

    def grow(current, frontier):
        if len(current) == size:
            results.append(frozenset(current))
            return
        for i, v in enumerate(frontier):
            rest = frontier[i + 1:]
            kids = [v + (j,) for j in range(len(subtree(host, v)) - 1) if not is_leaf(subtree(host, v + (j,)))]
            grow(current | {v}, rest + kids)

    kids0 = [root_path + (j,) for j in range(len(subtree(host, root_path)) - 1)
             if not is_leaf(subtree(host, root_path + (j,)))]
    grow({root_path}, kids0)
    return set(results)


def brute_divisor_sets(host, pattern) -> set:
    from shuffleops.shuffle_tree import degree

    k = degree(pattern)
    out = set()
    for v in internal_paths(host):
        for vs in _connected_sets(host, v, k):
            if _restriction(host, v, vs) == pattern:
                out.add(tuple(sorted(vs)))
    return out


def brute_overlaps(m1, m2, monomials) -> set:
    """Pairs of occurrences with intersecting vertex sets covering the host."""
    out = set()
    for host in monomials:
        allv = set(internal_paths(host))
        d1 = brute_divisor_sets(host, m1)
        d2 = brute_divisor_sets(host, m2)
        for a, b in itertools.product(d1, d2):
            if m1 == m2 and a == b:
                continue
            if set(a) & set(b) and set(a) | set(b) == allv:
                out.add((host, a, b))
    return out

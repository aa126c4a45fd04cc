"""Admissible orderings of tree monomials as composable key chains.

An ordering is a chain of keys, each turning a monomial into a tuple of
integers; monomials are compared by the concatenated tuples.  Generator
orders are written highest first, e.g. ``("b", "c")`` means ``b > c``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import ArityMismatch, ShuffleOpsError, UnknownPreset
from .shuffle_tree import (
    Signature,
    TreeMonomial,
    all_graftings,
    arity,
    degree,
    enumerate_monomials,
    path_sequence,
    to_str,
)

PRESETS = ("gpl", "rgpl", "permfirst-rev-gpl")


@dataclass(frozen=True)
class DegreeKey:
    direction: int = 1

    def token(self) -> str:
        return "degree" if self.direction > 0 else "-degree"


@dataclass(frozen=True)
class PathWordsKey:
    """Leaf-by-leaf comparison of root-to-leaf generator words.

    ``deglex`` compares word length first (longer is larger when
    ``length_direction`` is +1, shorter is larger when it is -1) and then the
    letters lexicographically.  ``lex`` is plain lexicographic order in which
    a proper prefix is smaller.
    """

    comparison: str = "deglex"
    direction: int = 1
    length_direction: int = 1

    def token(self) -> str:
        base = {("deglex", 1): "words", ("deglex", -1): "rwords"}.get(
            (self.comparison, self.length_direction), "lexwords"
        )
        return base if self.direction > 0 else "-" + base


@dataclass(frozen=True)
class LeafPermutationKey:
    """Planar reading of the leaf labels; ``reversed-lex`` negates entries."""

    comparison: str = "lex"
    direction: int = 1

    def token(self) -> str:
        base = "perm" if self.comparison == "lex" else "revperm"
        return base if self.direction > 0 else "-" + base


Key = Union[DegreeKey, PathWordsKey, LeafPermutationKey]


@dataclass(frozen=True)
class OrderingSpec:
    generator_order: tuple
    keys: tuple
    name: str = "custom"
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(set(self.generator_order)) != len(self.generator_order):
            raise ShuffleOpsError(f"repeated generator in order {self.generator_order}")
        n = len(self.generator_order)
        object.__setattr__(
            self, "_rank", {g: n - i for i, g in enumerate(self.generator_order)}
        )

    def describe(self) -> str:
        return f"{self.name}[{','.join(k.token() for k in self.keys)}] " + ">".join(
            self.generator_order
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "generator_order": list(self.generator_order),
            "keys": [k.token() for k in self.keys],
        }

    def _word(self, word, key: PathWordsKey) -> tuple:
        try:
            ranks = [self._rank[g] for g in word]
        except KeyError as exc:
            raise ShuffleOpsError(f"generator {exc.args[0]!r} missing from the order") from None
        if key.comparison == "deglex":
            out = (len(word) * key.length_direction, *ranks)
        else:
            out = (*ranks, 0)
        return tuple(key.direction * v for v in out)

    def key(self, m: TreeMonomial) -> tuple:
        cached = self._cache.get(m)
        if cached is not None:
            return cached
        words, perm = path_sequence(m)
        parts = []
        for k in self.keys:
            if isinstance(k, DegreeKey):
                parts.append((k.direction * degree(m),))
            elif isinstance(k, PathWordsKey):
                parts.append(tuple(self._word(w, k) for w in words))
            else:
                sign = 1 if k.comparison == "lex" else -1
                parts.append(tuple(k.direction * sign * p for p in perm))
        out = tuple(parts)
        self._cache[m] = out
        return out

    def compare(self, m1: TreeMonomial, m2: TreeMonomial) -> int:
        if arity(m1) != arity(m2):
            raise ArityMismatch("orderings compare monomials of equal arity only")
        if m1 == m2:
            return 0
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def max(self, monomials: Iterable[TreeMonomial]) -> TreeMonomial:
        return max(monomials, key=self.key)

    def sorted_desc(self, monomials: Iterable[TreeMonomial]) -> list:
        return sorted(monomials, key=self.key, reverse=True)


def expand_generator_order(order: Sequence[str], signature: Signature) -> tuple:
    """Accept variant names or base names; a base expands to all its variants."""
    out = []
    for name in order:
        if name in signature:
            out.append(name)
            continue
        variants = [g.name for g in signature.generators if g.base == name]
        if not variants:
            raise ShuffleOpsError(f"unknown generator {name!r} in order")
        out.extend(variants)
    if len(set(out)) != len(out):
        raise ShuffleOpsError(f"generator listed twice in order {list(order)}")
    missing = [g for g in signature.names if g not in out]
    out.extend(missing)
    return tuple(out)


def preset(name: str, generator_order: Sequence[str]) -> OrderingSpec:
    """One of the named orderings over the given generator order (highest first)."""
    if name == "gpl":
        keys = (DegreeKey(), PathWordsKey("deglex", 1, 1), LeafPermutationKey("lex"))
    elif name == "rgpl":
        keys = (DegreeKey(), PathWordsKey("deglex", 1, -1), LeafPermutationKey("lex"))
    elif name == "permfirst-rev-gpl":
        keys = (DegreeKey(), LeafPermutationKey("reversed-lex"), PathWordsKey("deglex", 1, 1))
    else:
        raise UnknownPreset(f"unknown ordering preset {name!r}; choose from {', '.join(PRESETS)}")
    return OrderingSpec(tuple(generator_order), keys, name)


_TOKENS = {
    "degree": DegreeKey(1),
    "words": PathWordsKey("deglex", 1, 1),
    "rwords": PathWordsKey("deglex", 1, -1),
    "lexwords": PathWordsKey("lex", 1, 1),
    "perm": LeafPermutationKey("lex", 1),
    "revperm": LeafPermutationKey("reversed-lex", 1),
}


def parse_keys(text: str) -> tuple:
    """Parse a custom key chain such as ``"degree,revperm,words"``.

    A leading ``-`` flips the direction of a key.
    """
    keys = []
    for raw in text.split(","):
        token = raw.strip()
        if not token:
            continue
        flip = token.startswith("-")
        base = token[1:] if flip else token
        if base not in _TOKENS:
            raise UnknownPreset(f"unknown ordering key {token!r}; choose from {', '.join(_TOKENS)}")
        k = _TOKENS[base]
        if flip:
            k = type(k)(**{**k.__dict__, "direction": -k.direction})
        keys.append(k)
    if not keys:
        raise UnknownPreset("empty key chain")
    return tuple(keys)


def make_ordering(text: str, generator_order: Sequence[str]) -> OrderingSpec:
    """A preset name, or ``custom:<key chain>``."""
    if text.startswith("custom:"):
        return OrderingSpec(tuple(generator_order), parse_keys(text[len("custom:"):]), "custom")
    return preset(text, generator_order)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityReport:
    passed: bool
    samples: int
    counterexample: Optional[tuple] = None

    def describe(self) -> str:
        if self.passed:
            return f"admissible on {self.samples} samples"
        m1, m2, g1, g2 = self.counterexample
        return (
            f"not admissible: {to_str(m1)} < {to_str(m2)} but after grafting "
            f"{to_str(g1)} >= {to_str(g2)}"
        )


def check_total(spec: OrderingSpec, signature: Signature, n: int) -> bool:
    """Every pair of distinct arity-n monomials is strictly comparable."""
    mons = enumerate_monomials(signature, n)
    return len({spec.key(m) for m in mons}) == len(mons)


def check_admissible(
    spec: OrderingSpec,
    signature: Signature,
    bound: int,
    samples: int = 1000,
    seed: int = 0,
) -> AdmissibilityReport:
    """Randomized test that grafting preserves strict inequalities.

    Each sample draws two distinct monomials of a common arity and a third
    monomial, and grafts the same way on both sides: either the pair goes
    into a leaf of the third, or the third goes into the same leaf of both.
    """
    if bound < 3:
        raise ShuffleOpsError("admissibility check needs an arity bound of at least 3")
    rng = random.Random(seed)
    pools = {n: enumerate_monomials(signature, n) for n in range(1, bound + 1)}
    done = 0
    attempts = 0
    while done < samples and attempts < samples * 20:
        attempts += 1
        a = rng.randint(2, bound - 1)
        if len(pools[a]) < 2:
            continue
        m1, m2 = rng.sample(pools[a], 2)
        if spec.compare(m1, m2) > 0:
            m1, m2 = m2, m1
        b = rng.randint(2, bound - a + 1)
        h = rng.choice(pools[b])
        if rng.random() < 0.5:
            i = rng.randint(1, b)
            choices1 = list(all_graftings(h, i, m1))
            choices2 = list(all_graftings(h, i, m2))
        else:
            i = rng.randint(1, a)
            choices1 = list(all_graftings(m1, i, h))
            choices2 = list(all_graftings(m2, i, h))
        idx = rng.randrange(len(choices1))
        g1, g2 = choices1[idx], choices2[idx]
        done += 1
        if spec.compare(g1, g2) >= 0:
            return AdmissibilityReport(False, done, (m1, m2, g1, g2))
    return AdmissibilityReport(True, done)

"""Tree monomials of free shuffle operads.

A monomial is stored as a plain nested tuple so that it hashes and compares
cheaply: a leaf is a positive ``int`` and an internal vertex is
``(name, child_1, ..., child_k)`` where ``name`` is a shuffle generator
variant.  The children of a vertex are always ordered so that their minimal
leaves increase from left to right, hence the minimal leaf of any subtree is
its leftmost leaf.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

from .errors import ArityMismatch, DuplicateLeafLabel, InvalidShuffle, ShuffleOpsError

TreeMonomial = Union[int, tuple]
Path = tuple  # child indices (0-based) from the root

PLAIN = "plain"
SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"


@dataclass(frozen=True)
class ShuffleGenerator:
    """One basis element of the ordered species of generators.

    ``perm`` records which argument order of the underlying symmetric
    operation this variant stands for: ``name(c_1, ..., c_k)`` equals
    ``base(c_perm[0], ..., c_perm[k-1])``.
    """

    name: str
    base: str
    arity: int
    perm: tuple
    symmetry: str = PLAIN

    @property
    def sign_rule(self) -> str:
        return "antisymmetric" if self.symmetry == ANTISYMMETRIC else "none"


def variant_name(base: str, perm: Sequence[int]) -> str:
    perm = tuple(perm)
    if perm == tuple(range(1, len(perm) + 1)):
        return base
    if perm == (2, 1):
        return base + "^op"
    return base + "^" + "".join(str(p) for p in perm)


@dataclass(frozen=True)
class Signature:
    """The finite list of shuffle generators monomials are decorated with."""

    generators: tuple

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ShuffleOpsError(f"duplicate generator variants in {names}")
        object.__setattr__(self, "_by_name", {g.name: g for g in self.generators})
        object.__setattr__(
            self, "_by_base", {(g.base, g.perm): g for g in self.generators}
        )

    def __getitem__(self, name: str) -> ShuffleGenerator:
        return self._by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    @property
    def names(self) -> tuple:
        return tuple(g.name for g in self.generators)

    def variant(self, base: str, perm: Sequence[int]) -> ShuffleGenerator:
        return self._by_base[(base, tuple(perm))]

    def dims_by_arity(self) -> dict:
        out: dict = {}
        for g in self.generators:
            out[g.arity] = out.get(g.arity, 0) + 1
        return out


# ---------------------------------------------------------------------------
# basic structure
# ---------------------------------------------------------------------------


def is_leaf(t: TreeMonomial) -> bool:
    return isinstance(t, int)


def leaves(t: TreeMonomial) -> list:
    """Leaf labels in planar (left to right) order."""
    if isinstance(t, int):
        return [t]
    out = []
    for c in t[1:]:
        out.extend(leaves(c))
    return out


def arity(t: TreeMonomial) -> int:
    if isinstance(t, int):
        return 1
    return sum(arity(c) for c in t[1:])


def degree(t: TreeMonomial) -> int:
    """Number of internal vertices."""
    if isinstance(t, int):
        return 0
    return 1 + sum(degree(c) for c in t[1:])


def min_leaf(t: TreeMonomial) -> int:
    while not isinstance(t, int):
        t = t[1]
    return t


def subtree(t: TreeMonomial, path: Path) -> TreeMonomial:
    for i in path:
        t = t[i + 1]
    return t


def set_subtree(t: TreeMonomial, path: Path, new: TreeMonomial) -> TreeMonomial:
    if not path:
        return new
    i = path[0]
    children = list(t[1:])
    children[i] = set_subtree(children[i], path[1:], new)
    return (t[0], *children)


def internal_paths(t: TreeMonomial, prefix: Path = ()) -> list:
    """Paths of internal vertices in preorder."""
    if isinstance(t, int):
        return []
    out = [prefix]
    for i, c in enumerate(t[1:]):
        out.extend(internal_paths(c, prefix + (i,)))
    return out


def relabel(t: TreeMonomial, mapping) -> TreeMonomial:
    if isinstance(t, int):
        return mapping[t]
    return (t[0],) + tuple(relabel(c, mapping) for c in t[1:])


def standardize(t: TreeMonomial) -> TreeMonomial:
    """Relabel leaves order-preservingly onto 1..n."""
    labels = sorted(leaves(t))
    return relabel(t, {v: i + 1 for i, v in enumerate(labels)})


def is_shuffle_tree(t: TreeMonomial) -> bool:
    """Local increasing condition at every vertex."""
    if isinstance(t, int):
        return True
    mins = [min_leaf_any(c) for c in t[1:]]
    if any(a >= b for a, b in zip(mins, mins[1:])):
        return False
    return all(is_shuffle_tree(c) for c in t[1:])


def min_leaf_any(t: TreeMonomial) -> int:
    """Minimal leaf of a tree not known to be a shuffle tree."""
    return min(leaves(t))


def check_monomial(t: TreeMonomial, signature: Optional[Signature] = None) -> TreeMonomial:
    """Validate every TreeMonomial invariant; return ``t`` unchanged."""
    labels = leaves(t)
    if sorted(labels) != list(range(1, len(labels) + 1)):
        if len(set(labels)) != len(labels):
            raise DuplicateLeafLabel(f"repeated leaf label in {to_str(t)}")
        raise InvalidShuffle(f"leaf labels of {to_str(t)} are not 1..{len(labels)}")
    if not is_shuffle_tree(t):
        raise InvalidShuffle(f"{to_str(t)} violates the local increasing condition")
    if signature is not None:
        for path in internal_paths(t):
            node = subtree(t, path)
            if node[0] not in signature:
                raise ShuffleOpsError(f"unknown generator {node[0]!r}")
            if signature[node[0]].arity != len(node) - 1:
                raise ArityMismatch(f"{node[0]} expects {signature[node[0]].arity} children")
    return t


# ---------------------------------------------------------------------------
# canonical form of raw terms
# ---------------------------------------------------------------------------


def _perm_sign(ranks: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(ranks)
    for i in range(len(ranks)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = ranks[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def canonical(term: TreeMonomial, signature: Signature) -> tuple:
    """Rewrite a raw term with distinct leaves into the shuffle basis.

    Returns ``(monomial, sign)``.  Children are sorted by minimal leaf; a
    plain generator absorbs the reordering into its variant, an
    antisymmetric one contributes the sign of the reordering.
    """
    labels = leaves(term)
    if len(set(labels)) != len(labels):
        raise DuplicateLeafLabel(f"repeated leaf label in {to_str(term)}")
    return _canonical(term, signature)


def _canonical(term, signature):
    if isinstance(term, int):
        return term, 1
    gen = signature[term[0]]
    if len(term) - 1 != gen.arity:
        raise ArityMismatch(f"{gen.name} expects {gen.arity} children")
    sign = 1
    kids = []
    for c in term[1:]:
        k, s = _canonical(c, signature)
        sign *= s
        kids.append(k)
    mins = [min_leaf(k) for k in kids]
    order = sorted(range(len(kids)), key=mins.__getitem__)
    ranks = [0] * len(kids)
    for r, i in enumerate(order):
        ranks[i] = r + 1
    sorted_kids = tuple(kids[i] for i in order)
    if gen.symmetry == PLAIN:
        new_perm = tuple(ranks[p - 1] for p in gen.perm)
        name = signature.variant(gen.base, new_perm).name
    else:
        name = gen.name
        if gen.symmetry == ANTISYMMETRIC:
            sign *= _perm_sign(ranks)
    return (name, *sorted_kids), sign


# ---------------------------------------------------------------------------
# grafting
# ---------------------------------------------------------------------------


def graft(outer: TreeMonomial, i: int, inner: TreeMonomial, labels) -> TreeMonomial:
    """Shuffle composition: insert ``inner`` at leaf ``i`` of ``outer``.

    ``labels`` is the set of labels the leaves of ``inner`` receive (in
    order-preserving fashion); the other leaves of ``outer`` receive the
    remaining labels of ``1..n`` in order.  The composite is a shuffle
    composition only if leaf ``i`` of ``outer`` lands on ``min(labels)`` in
    an order-preserving way; otherwise :class:`InvalidShuffle` is raised.
    """
    m, k = arity(outer), arity(inner)
    labels = sorted(labels)
    n = m + k - 1
    if len(labels) != k or len(set(labels)) != k or not all(1 <= x <= n for x in labels):
        raise InvalidShuffle(f"need {k} distinct labels in 1..{n}, got {labels}")
    if not 1 <= i <= m:
        raise InvalidShuffle(f"leaf index {i} out of range 1..{m}")
    rest = [x for x in range(1, n + 1) if x not in set(labels)]
    outer_map = {}
    it = iter(rest)
    for leaf in range(1, m + 1):
        outer_map[leaf] = labels[0] if leaf == i else next(it)
    images = [outer_map[leaf] for leaf in range(1, m + 1)]
    if any(a >= b for a, b in zip(images, images[1:])):
        raise InvalidShuffle("label assignment violates the shuffle condition")
    inner_map = {j + 1: labels[j] for j in range(k)}
    new_inner = relabel(inner, inner_map)

    def build(t):
        if isinstance(t, int):
            return new_inner if t == i else outer_map[t]
        return (t[0],) + tuple(build(c) for c in t[1:])

    return build(outer)


def all_graftings(outer: TreeMonomial, i: int, inner: TreeMonomial) -> Iterator[TreeMonomial]:
    """Every valid shuffle composition ``outer o_i inner``."""
    m, k = arity(outer), arity(inner)
    n = m + k - 1
    for labels in itertools.combinations(range(1, n + 1), k):
        try:
            yield graft(outer, i, inner, labels)
        except InvalidShuffle:
            continue


# ---------------------------------------------------------------------------
# divisibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Occurrence:
    """An embedding of ``pattern`` into ``host``.

    ``vertices[j]`` is the host path of the j-th internal vertex of the
    pattern (preorder); ``exits[j]`` is the host path of the subtree that
    plays the role of pattern leaf ``j + 1``.
    """

    host: TreeMonomial
    pattern: TreeMonomial
    root: Path
    vertices: tuple
    exits: tuple

    @property
    def vertex_set(self) -> tuple:
        return tuple(sorted(self.vertices))


def _match(h, p, hpath, vertices, exits) -> bool:
    if isinstance(p, int):
        exits[p] = hpath
        return True
    if isinstance(h, int) or h[0] != p[0] or len(h) != len(p):
        return False
    vertices.append(hpath)
    for idx in range(1, len(p)):
        if not _match(h[idx], p[idx], hpath + (idx - 1,), vertices, exits):
            return False
    return True


def match_at(host: TreeMonomial, path: Path, pattern: TreeMonomial) -> Optional[Occurrence]:
    """The occurrence of ``pattern`` rooted at host vertex ``path``, if any."""
    if isinstance(pattern, int):
        raise ShuffleOpsError("the bare leaf is not a valid divisibility pattern")
    vertices: list = []
    exits: dict = {}
    if not _match(subtree(host, path), pattern, path, vertices, exits):
        return None
    ordered = tuple(exits[j] for j in range(1, len(exits) + 1))
    prev = 0
    for e in ordered:
        m = min_leaf(subtree(host, e))
        if m <= prev:
            return None
        prev = m
    return Occurrence(host, pattern, path, tuple(vertices), ordered)


def divisors(host: TreeMonomial, pattern: TreeMonomial) -> list:
    """All occurrences of ``pattern`` in ``host``, ordered by vertex-image set."""
    if isinstance(pattern, int):
        raise ShuffleOpsError("the bare leaf is not a valid divisibility pattern")
    out = []
    root_name = pattern[0]
    for path in internal_paths(host):
        if subtree(host, path)[0] != root_name:
            continue
        occ = match_at(host, path, pattern)
        if occ is not None:
            out.append(occ)
    out.sort(key=lambda o: o.vertex_set)
    return out


def divides(pattern: TreeMonomial, host: TreeMonomial) -> bool:
    root_name = pattern[0]
    for path in internal_paths(host):
        if subtree(host, path)[0] == root_name and match_at(host, path, pattern) is not None:
            return True
    return False


def replace(occ: Occurrence, substitute: TreeMonomial) -> tuple:
    """Swap the pattern of ``occ`` for ``substitute``; returns ``(tree, sign)``.

    Substituting along an occurrence is a shuffle composition, so the result
    is already a shuffle tree and the sign is always +1.
    """
    k = len(occ.exits)
    if arity(substitute) != k:
        raise ArityMismatch(f"substitute has arity {arity(substitute)}, pattern has {k}")
    host = occ.host
    branches = {j + 1: subtree(host, occ.exits[j]) for j in range(k)}

    def build(t):
        if isinstance(t, int):
            return branches[t]
        return (t[0],) + tuple(build(c) for c in t[1:])

    return set_subtree(host, occ.root, build(substitute)), 1


# ---------------------------------------------------------------------------
# overlaps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OverlapSite:
    ambient: TreeMonomial
    occ1: Occurrence
    occ2: Occurrence

    @property
    def arity(self) -> int:
        return arity(self.ambient)


_HOLE = 0


def _shape(t):
    if isinstance(t, int):
        return _HOLE
    return (t[0],) + tuple(_shape(c) for c in t[1:])


def _overlay(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return _HOLE
    if isinstance(a, int):
        return _shape(b)
    if isinstance(b, int):
        return _shape(a)
    if a[0] != b[0] or len(a) != len(b):
        return None
    kids = []
    for x, y in zip(a[1:], b[1:]):
        z = _overlay(x, y)
        if z is None:
            return None
        kids.append(z)
    return (a[0], *kids)


def _number_holes(shape):
    counter = itertools.count(1)

    def walk(t):
        if isinstance(t, int):
            return next(counter)
        return (t[0],) + tuple(walk(c) for c in t[1:])

    numbered = walk(shape)
    return numbered, next(counter) - 1


def _sites_for(top, lower, path, bound, swap):
    """Overlaps with ``top`` rooted at the ambient root and ``lower`` at ``path``."""
    sub = _overlay(subtree(top, path), lower)
    if sub is None:
        return []
    shape = set_subtree(_shape(top), path, sub)
    numbered, n = _number_holes(shape)
    if n > bound:
        return []
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        if perm[0] != 1:
            break
        cand = relabel(numbered, {i + 1: perm[i] for i in range(n)})
        if not is_shuffle_tree(cand):
            continue
        o_top = match_at(cand, (), top)
        if o_top is None:
            continue
        o_low = match_at(cand, path, lower)
        if o_low is None:
            continue
        out.append(OverlapSite(cand, o_low, o_top) if swap else OverlapSite(cand, o_top, o_low))
    return out


def overlaps(m1: TreeMonomial, m2: TreeMonomial, bound: Optional[int] = None) -> list:
    """All small common multiples of ``m1`` and ``m2`` of arity at most ``bound``.

    For ``m1 == m2`` the identical occurrence is excluded but both orders of
    every pair of distinct occurrences are returned.
    """
    if isinstance(m1, int) or isinstance(m2, int):
        raise ShuffleOpsError("the bare leaf is not a valid divisibility pattern")
    if bound is None:
        bound = arity(m1) + arity(m2) - 1
    same = m1 == m2
    sites = []
    for path in internal_paths(m1):
        if same and path == ():
            continue
        sites.extend(_sites_for(m1, m2, path, bound, swap=False))
    for path in internal_paths(m2):
        if path == ():
            continue
        sites.extend(_sites_for(m2, m1, path, bound, swap=True))
    seen = set()
    unique = []
    for s in sites:
        key = (s.ambient, s.occ1.vertex_set, s.occ2.vertex_set)
        if key in seen:
            continue
        seen.add(key)
        unique.append(s)
    unique.sort(key=lambda s: (arity(s.ambient), to_str(s.ambient), s.occ1.vertex_set, s.occ2.vertex_set))
    return unique


# ---------------------------------------------------------------------------
# structural predicates
# ---------------------------------------------------------------------------


def is_left_comb(t: TreeMonomial) -> bool:
    """Every internal vertex lies on the path from the root to leaf 1."""
    while not isinstance(t, int):
        if any(not isinstance(c, int) for c in t[2:]):
            return False
        t = t[1]
    return True


def min_leaf_at_root(t: TreeMonomial) -> bool:
    return not isinstance(t, int) and t[1] == 1


def _parent_path(t, label, prefix=()):
    for i, c in enumerate(t[1:]):
        if isinstance(c, int):
            if c == label:
                return prefix
        else:
            found = _parent_path(c, label, prefix + (i,))
            if found is not None:
                return found
    return None


def second_min_sibling_of_min(t: TreeMonomial) -> bool:
    if isinstance(t, int) or arity(t) < 2:
        return False
    return _parent_path(t, 1) == _parent_path(t, 2)


def path_sequence(t: TreeMonomial) -> tuple:
    """``(words, permutation)``: root-first generator words per leaf label and
    the leaf labels read left to right."""
    words = {}

    def walk(node, prefix):
        if isinstance(node, int):
            words[node] = prefix
            return
        w = prefix + (node[0],)
        for c in node[1:]:
            walk(c, w)

    walk(t, ())
    return tuple(words[i] for i in sorted(words)), tuple(leaves(t))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def ordered_set_partitions(items: Sequence[int], k: int) -> Iterator[list]:
    """Partitions of ``items`` into ``k`` blocks, blocks ordered by minimum."""
    items = list(items)

    def rec(idx, blocks):
        if len(blocks) > k:
            return
        if len(items) - idx < k - len(blocks):
            return
        if idx == len(items):
            if len(blocks) == k:
                yield [list(b) for b in blocks]
            return
        x = items[idx]
        for b in blocks:
            b.append(x)
            yield from rec(idx + 1, blocks)
            b.pop()
        blocks.append([x])
        yield from rec(idx + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def enumerate_monomials(signature: Signature, n: int) -> list:
    """Every shuffle tree monomial of arity ``n`` over ``signature``."""
    return list(_enumerate(signature.generators, n))


@lru_cache(maxsize=None)
def _enumerate(generators: tuple, n: int) -> tuple:
    if n == 1:
        return (1,)
    out = []
    for g in generators:
        k = g.arity
        if k > n:
            continue
        for blocks in ordered_set_partitions(range(1, n + 1), k):
            choices = []
            for block in blocks:
                mapping = {i + 1: v for i, v in enumerate(block)}
                choices.append([relabel(t, mapping) for t in _enumerate(generators, len(block))])
            for kids in itertools.product(*choices):
                out.append((g.name, *kids))
    return tuple(out)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------


def to_str(t: TreeMonomial) -> str:
    if isinstance(t, int):
        return str(t)
    return f"{t[0]}(" + ",".join(to_str(c) for c in t[1:]) + ")"


def parse_monomial(text: str) -> TreeMonomial:
    """Inverse of :func:`to_str`, e.g. ``"b(b(1,2),3)"``."""
    s = "".join(text.split())
    pos = 0

    def parse():
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos] not in "(),":
            pos += 1
        token = s[start:pos]
        if pos < len(s) and s[pos] == "(":
            if not token:
                raise ShuffleOpsError(f"missing generator name at {start} in {text!r}")
            pos += 1
            kids = [parse()]
            while pos < len(s) and s[pos] == ",":
                pos += 1
                kids.append(parse())
            if pos >= len(s) or s[pos] != ")":
                raise ShuffleOpsError(f"expected ')' at {pos} in {text!r}")
            pos += 1
            return (token, *kids)
        if not token.isdigit():
            raise ShuffleOpsError(f"expected leaf label at {start} in {text!r}")
        return int(token)

    t = parse()
    if pos != len(s):
        raise ShuffleOpsError(f"trailing text at {pos} in {text!r}")
    return t


def left_comb(names: Sequence[str], labels: Sequence[int]) -> TreeMonomial:
    """Binary left comb; ``names`` run root first, ``labels`` in planar order."""
    names = list(names)
    t = names[-1], labels[0], labels[1]
    for name, lab in zip(reversed(names[:-1]), labels[2:]):
        t = (name, t, lab)
    return t


def right_comb(names: Sequence[str], labels: Sequence[int]) -> TreeMonomial:
    """Binary right comb; ``names`` run root first, ``labels`` in planar order."""
    names = list(names)
    t = (names[-1], labels[-2], labels[-1])
    for name, lab in zip(reversed(names[:-1]), reversed(labels[:-2])):
        t = (name, lab, t)
    return t

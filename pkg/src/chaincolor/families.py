"""k-independent families of subsets of [n].

A family is r-independent when, for every r of its members, all 2^r cells
B_1 & ... & B_r (each B_j a member or its complement) are nonempty.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import bitsets as bs
from .errors import FamilyUnavailable, SizeBudget

EXACT_N_CAP = 6


@dataclass(frozen=True)
class SetFamily:
    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise ValueError("family members must be distinct")
        universe = bs.full(self.n)
        for a in self.members:
            if a & ~universe:
                raise ValueError(f"member {bs.elements(a)} not inside [1, {self.n}]")

    def __len__(self) -> int:
        return len(self.members)

    def truncate(self, k: int) -> "SetFamily":
        return SetFamily(self.n, self.members[:k])


def _patterns(n: int, members) -> list[int]:
    """Per ground element, the bitmask of members containing it."""
    out = []
    for e in range(n):
        p = 0
        for j, a in enumerate(members):
            if a >> e & 1:
                p |= 1 << j
        out.append(p)
    return out


def _combo_ok(n: int, members, combo) -> bool:
    need = 1 << len(combo)
    if n < need:
        return False
    seen = set()
    for e in range(n):
        p = 0
        for j, idx in enumerate(combo):
            if members[idx] >> e & 1:
                p |= 1 << j
        seen.add(p)
    return len(seen) == need


def is_r_independent(family: SetFamily, r: int) -> bool:
    """Every min(r, |F|) members have all Venn cells nonempty."""
    if r < 1:
        raise ValueError("r must be positive")
    k = min(r, len(family.members))
    if k == 0:
        return True
    if family.n < 1 << k:
        return False
    pats = _patterns(family.n, family.members)
    for combo in combinations(range(len(family.members)), k):
        seen = set()
        for p in pats:
            seen.add(sum(1 << j for j, idx in enumerate(combo) if p >> idx & 1))
        if len(seen) != 1 << k:
            return False
    return True


def _extends(n: int, members: list[int], r: int) -> bool:
    """Check only the combinations involving the last member."""
    size = len(members)
    k = min(r, size)
    last = size - 1
    if k == size:
        return _combo_ok(n, members, tuple(range(size)))
    for rest in combinations(range(last), k - 1):
        if not _combo_ok(n, members, rest + (last,)):
            return False
    return True


def construct_2_independent(n: int) -> SetFamily:
    """All floor(n/2)-subsets of [n] that contain 1."""
    if n < 2:
        raise ValueError("need n >= 2")
    h = n // 2
    members = tuple(bs.to_mask((1,) + c) for c in combinations(range(2, n + 1), h - 1))
    return SetFamily(n, members)


def f_formula_2(n: int) -> int:
    return math.comb(n - 1, n // 2 - 1)


def f_exact_small(n: int, k: int, n_cap: int = EXACT_N_CAP) -> int:
    """Largest k-independent family on [n], by exhaustive search."""
    if n > n_cap:
        raise SizeBudget(f"exact search is capped at n <= {n_cap}")
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    universe = bs.full(n)
    cands = [a for a in bs.canonical_subsets(n) if a and a != universe]
    if k >= 2:
        # A and its complement together leave an empty cell, and swapping a
        # member for its complement preserves independence.
        cands = [a for a in cands if a & 1]
    best = 0
    chosen: list[int] = []

    def grow(start: int):
        nonlocal best
        best = max(best, len(chosen))
        if len(chosen) + len(cands) - start <= best:
            return
        for i in range(start, len(cands)):
            if len(chosen) + len(cands) - i <= best:
                return
            chosen.append(cands[i])
            if _extends(n, chosen, k):
                grow(i + 1)
            chosen.pop()

    grow(0)
    return best


def search_family(n: int, k: int, target_size: int, seed: int = 0, retry_budget: int = 10**5) -> SetFamily | None:
    """Seeded random search for a k-independent family of ``target_size`` sets.

    Members are uniform random subsets, kept when they extend the current
    family; after too many consecutive rejections the search restarts.
    Returns None when the budget runs out (which proves nothing).
    """
    if target_size < 1:
        raise ValueError("target_size must be positive")
    if n < 1 << min(k, target_size):
        return None
    rng = random.Random(seed)
    patience = 50 * target_size
    attempts = 0
    while attempts < retry_budget:
        members: list[int] = []
        misses = 0
        while len(members) < target_size and misses < patience and attempts < retry_budget:
            attempts += 1
            cand = rng.getrandbits(n)
            if cand in members:
                misses += 1
                continue
            members.append(cand)
            if _extends(n, members, k):
                misses = 0
            else:
                members.pop()
                misses += 1
        if len(members) == target_size:
            fam = SetFamily(n, tuple(members))
            assert is_r_independent(fam, k)
            return fam
    return None


def cube_family(k: int) -> SetFamily:
    """k sets on 2^k points whose cells are all singletons; independent at every order."""
    n = 1 << k
    members = tuple(bs.to_mask(x + 1 for x in range(n) if x >> j & 1) for j in range(k))
    return SetFamily(n, members)


@lru_cache(maxsize=None)
def default_family(r: int, k: int, seed: int = 0) -> SetFamily:
    """A verified r-independent family with exactly k members on a small ground set."""
    if k < 1 or r < 1:
        raise FamilyUnavailable("need r >= 1 and k >= 1")
    r_eff = min(r, k)
    if r_eff >= k:
        fam = cube_family(k)
    elif r_eff == 1:
        n = 2
        while (1 << n) - 2 < k:
            n += 1
        universe = bs.full(n)
        cands = [a for a in bs.canonical_subsets(n) if a and a != universe]
        fam = SetFamily(n, tuple(cands[:k]))
    elif r_eff == 2:
        n = 2
        while f_formula_2(n) < k:
            n += 1
        fam = construct_2_independent(n).truncate(k)
    else:
        fam = None
        for n in range(1 << r_eff, 1 << k):
            fam = search_family(n, r_eff, k, seed=seed, retry_budget=2000)
            if fam is not None:
                break
        if fam is None:
            fam = cube_family(k)
    if not is_r_independent(fam, r_eff):
        raise FamilyUnavailable(f"provider produced a family that is not {r_eff}-independent")
    return fam


def default_provider(r: int, h: int) -> SetFamily:
    """Family with enough members to encode h colours (2^k >= h)."""
    k = max(1, math.ceil(math.log2(h))) if h > 1 else 1
    while (1 << k) < h:
        k += 1
    return default_family(r, k)

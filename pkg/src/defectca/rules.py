"""Local rules: construction, invariance, permutativity, resolving checks.

A rule is stored as a total map from radius-``r`` neighborhoods to symbols,
either as a dense table (small alphabets) or as a callable with memoization
(block alphabets can be far too large to tabulate).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from .errors import DefectcaError
from .shifts import (
    SFT,
    Alphabet,
    BlockCoder,
    MarkovShift,
    Word,
    binary_alphabet,
    block_alphabet,
    markov_presentation,
    markov_to_sft,
    pack_word,
    sft_to_markov,
    transitive_components,
    unpack_word,
)


class LocalRule:
    """A radius-``r`` local rule ``phi: A^(2r+1) -> A``.

    ``fn`` must be total on neighborhoods; lookups are memoized.  Use
    :meth:`dense_table` only on alphabets small enough to enumerate.
    """

    def __init__(self, alphabet: Alphabet, radius: int,
                 fn: Callable[[Word], int], name: str = ""):
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        self.alphabet = alphabet
        self.radius = radius
        self.name = name
        self._fn = fn
        self._memo: dict[Word, int] = {}

    def __repr__(self):
        return f"LocalRule({self.name or 'anonymous'}, radius={self.radius})"

    def __call__(self, nbhd: Sequence[int]) -> int:
        key = tuple(nbhd)
        out = self._memo.get(key)
        if out is None:
            if len(key) != 2 * self.radius + 1:
                raise ValueError(f"neighborhood must have length {2 * self.radius + 1}")
            out = self._fn(key)
            if not (0 <= out < self.alphabet.size):
                raise DefectcaError(f"rule output {out} outside alphabet")
            self._memo[key] = out
        return out

    def image_word(self, word: Sequence[int]) -> Word:
        """Apply the rule along a word; output is shorter by 2r."""
        w = tuple(word)
        k = 2 * self.radius + 1
        return tuple(self(w[j:j + k]) for j in range(len(w) - k + 1))

    def dense_table(self) -> dict[Word, int]:
        k = 2 * self.radius + 1
        return {n: self(n) for n in product(range(self.alphabet.size), repeat=k)}


def rule_from_table(alphabet: Alphabet, radius: int,
                    table: dict[Word, int], name: str = "") -> LocalRule:
    k = 2 * radius + 1
    if len(table) != alphabet.size ** k:
        raise ValueError("rule table must be total on all neighborhoods")
    t = dict(table)
    return LocalRule(alphabet, radius, lambda n: t[n], name=name)


def from_wolfram_number(n: int) -> LocalRule:
    """Elementary CA rule: binary alphabet, radius 1, phi(i,j,k) = bit 4i+2j+k of n."""
    if not 0 <= n <= 255:
        raise ValueError("Wolfram number must be in [0, 255]")
    table = {(i, j, k): (n >> (4 * i + 2 * j + k)) & 1
             for i in (0, 1) for j in (0, 1) for k in (0, 1)}
    return rule_from_table(binary_alphabet(), 1, table, name=f"ECA{n}")


def from_linear(n: int, coeffs: tuple[int, int, int]) -> LocalRule:
    """phi(a, b, c) = (c-1*a + c0*b + c1*c) mod n on the alphabet 0..n-1."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    cm, c0, cp = coeffs
    alpha = Alphabet(tuple(str(i) for i in range(n)))
    return LocalRule(alpha, 1,
                     lambda w: (cm * w[0] + c0 * w[1] + cp * w[2]) % n,
                     name=f"linear{coeffs}mod{n}")


def identity_rule(alphabet: Alphabet) -> LocalRule:
    return LocalRule(alphabet, 1, lambda w: w[1], name="identity")


# ---------------------------------------------------------------------------
# Invariance / permutativity / resolving
# ---------------------------------------------------------------------------

def _as_sft(background) -> SFT:
    if isinstance(background, MarkovShift):
        return markov_to_sft(background)
    return background


def check_invariance(rule: LocalRule, background) -> bool:
    """True iff the image of every admissible (q+2r)-word is admissible."""
    sft = _as_sft(background)
    q, r = sft.q, rule.radius
    words = [w for w in product(range(rule.alphabet.size), repeat=q + 2 * r)
             if sft.is_locally_admissible(w)]
    return all(rule.image_word(w) in sft.admissible for w in words)


def is_left_permutative(rule: LocalRule, subalphabet: Iterable[int]) -> bool:
    """The leftmost argument acts bijectively on the subalphabet."""
    syms = sorted(subalphabet)
    if rule.radius != 1:
        raise ValueError("permutativity checks need a radius-1 rule")
    for b in syms:
        for c in syms:
            image = {rule((a, b, c)) for a in syms}
            if image != set(syms):
                return False
    return True


def is_right_permutative(rule: LocalRule, subalphabet: Iterable[int]) -> bool:
    syms = sorted(subalphabet)
    if rule.radius != 1:
        raise ValueError("permutativity checks need a radius-1 rule")
    for a in syms:
        for b in syms:
            image = {rule((a, b, c)) for c in syms}
            if image != set(syms):
                return False
    return True


def is_left_resolving(rule: LocalRule, shift: MarkovShift,
                      witness: Optional[list] = None) -> bool:
    """For each admissible (b,c,d), predecessors of b map injectively under
    a -> phi(a,b,c) into the predecessors of phi(b,c,d)."""
    if rule.radius != 1:
        raise ValueError("radius must be 1 (recode first)")
    for b, c in shift.edges:
        for d in shift.followers(c):
            e = rule((b, c, d))
            seen = {}
            for a in shift.predecessors(b):
                out = rule((a, b, c))
                if out in seen or out not in shift.predecessors(e):
                    if witness is not None:
                        witness.append((a, b, c, d))
                    return False
                seen[out] = a
    return True


def is_right_resolving(rule: LocalRule, shift: MarkovShift,
                       witness: Optional[list] = None) -> bool:
    if rule.radius != 1:
        raise ValueError("radius must be 1 (recode first)")
    for a, b in shift.edges:
        for c in shift.followers(b):
            e = rule((a, b, c))
            seen = {}
            for d in shift.followers(c):
                out = rule((b, c, d))
                if out in seen or out not in shift.followers(e):
                    if witness is not None:
                        witness.append((a, b, c, d))
                    return False
                seen[out] = d
    return True


def is_surjective_on(rule: LocalRule, shift: MarkovShift, length: int = 3) -> bool:
    """Check Phi(S) = S on words: every admissible word has an admissible preimage."""
    r = rule.radius
    images = {rule.image_word(w) for w in shift.words(length + 2 * r)
              if shift.is_admissible(w)}
    return set(shift.words(length)) <= images


def find_travelling_wave_backgrounds(rule: LocalRule, p: int, v: int,
                                     max_period: int) -> list[list[Word]]:
    """All periodic points w with period <= max_period and Phi^p(w) = sigma^(p*v)(w).

    Returns sigma-orbits, each listed from its lexicographically least
    rotation; orbits are keyed by primitive period.
    """
    if p < 1 or max_period < 1:
        raise ValueError("p and max_period must be >= 1")
    seen: set[Word] = set()
    orbits: list[list[Word]] = []
    for n in range(1, max_period + 1):
        for w in product(range(rule.alphabet.size), repeat=n):
            if w in seen:
                continue
            rots = [tuple(w[(i + k) % n] for i in range(n)) for k in range(n)]
            if len(set(rots)) != n:
                continue  # not primitive: counted at its primitive period
            cur = w
            for _ in range(p):
                cur = tuple(rule(tuple(cur[(i + d) % n] for d in range(-rule.radius,
                                                                       rule.radius + 1)))
                            for i in range(n))
            target = tuple(w[(i + p * v) % n] for i in range(n))
            if cur == target:
                orbit = sorted(set(rots))
                seen.update(rots)
                orbits.append(orbit)
    return orbits


# ---------------------------------------------------------------------------
# Radius/window normalization: the block recoding of rule + background
# ---------------------------------------------------------------------------

def recode_rule(rule: LocalRule, P: int) -> LocalRule:
    """Lift a radius<=1 rule to the overlapping P-block alphabet (radius 1).

    On de Bruijn-consistent neighborhoods this is the conjugated dynamics;
    inconsistent neighborhoods (which no recoded configuration ever
    produces) map to the lexicographically least block symbol.
    """
    if rule.radius > 1:
        raise NotImplementedError("recode requires radius <= 1; power-recode first")
    base = rule if rule.radius == 1 else LocalRule(
        rule.alphabet, 1, lambda w, _r=rule: _r((w[1],)), name=rule.name)
    if P == 1:
        return base
    alpha = rule.alphabet
    target = block_alphabet(alpha, P)

    def fn(nbhd: Word) -> int:
        u = unpack_word(alpha, nbhd[0], P)
        v = unpack_word(alpha, nbhd[1], P)
        w = unpack_word(alpha, nbhd[2], P)
        if u[1:] != v[:-1] or v[1:] != w[:-1]:
            return 0
        fused = u + (v[-1], w[-1])
        return pack_word(alpha, base.image_word(fused))

    return LocalRule(target, 1, fn, name=f"{rule.name}^[{P}]")


def power_recode_rule(rule: LocalRule, W: int) -> LocalRule:
    """Lift a rule to the non-overlapping W-block alphabet (radius 1 for W >= r).

    One block step equals W source steps of the shift but a single
    application of the rule.
    """
    if W < 1:
        raise ValueError("power must be >= 1")
    if W == 1:
        return rule
    r = rule.radius
    if r > W:
        raise NotImplementedError("power recode needs W >= rule radius")
    alpha = rule.alphabet
    target = block_alphabet(alpha, W)

    def fn(nbhd: Word) -> int:
        cells = (unpack_word(alpha, nbhd[0], W) + unpack_word(alpha, nbhd[1], W)
                 + unpack_word(alpha, nbhd[2], W))
        return pack_word(alpha, rule.image_word(cells[W - r: 2 * W + r]))

    return LocalRule(target, 1, fn, name=f"{rule.name}^({W})")


@dataclass(frozen=True)
class RecodedSystem:
    """A rule/background pair normalized to radius 1 over a Markov shift.

    All coordinates inside the recoded system are block positions; block z
    covers source cells [z, z+P).  ``coder`` converts words back to source
    symbols.
    """

    base_rule: LocalRule
    rule: LocalRule
    shift: MarkovShift
    coder: BlockCoder

    @property
    def P(self) -> int:
        return self.coder.P


def normalize(rule: LocalRule, background) -> RecodedSystem:
    """Apply the standard reduction: P = max(2r, q) block presentation.

    Already-Markov backgrounds with radius<=1 rules are left untouched.
    """
    sft = _as_sft(background)
    if rule.radius > 1:
        raise NotImplementedError("normalization implemented for radius <= 1 rules")
    if sft.q <= 2:
        shift, coder = sft_to_markov(sft)
        return RecodedSystem(rule, recode_rule(rule, 1), shift, coder)
    P = max(2 * max(rule.radius, 1), sft.q)
    shift, coder = markov_presentation(sft, P)
    return RecodedSystem(rule, recode_rule(rule, P), shift, coder)


def phi_orbit_components(rule: LocalRule, shift: MarkovShift) -> list[MarkovShift]:
    """Group the sigma-transitive components of a rule-invariant shift into
    rule-orbits; each group is returned as one sub-shift (their union)."""
    if rule.radius != 1:
        raise ValueError("radius must be 1 (recode first)")
    comps = transitive_components(shift)
    owner = {}
    for i, comp in enumerate(comps):
        for v in comp.usable:
            owner[v] = i
    parent = list(range(len(comps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, comp in enumerate(comps):
        # probe: image of any admissible 3-word's center
        v = min(comp.usable)
        pre = comp.predecessors(v)[0]
        post = comp.followers(v)[0]
        img = rule((pre, v, post))
        if img not in owner:
            raise DefectcaError(f"rule image of component {i} leaves the shift")
        a, b = find(i), find(owner[img])
        if a != b:
            parent[max(a, b)] = min(a, b)

    groups: dict[int, set[int]] = {}
    for i, comp in enumerate(comps):
        groups.setdefault(find(i), set()).update(comp.usable)
    return [shift.restrict(vs) for _, vs in sorted(groups.items())]

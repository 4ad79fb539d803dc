"""Product functionals on the free product of two single-generator algebras.

A :class:`Word` is an alternating product of generator powers from two
algebras.  The monotone product functional factors such a word directly:
the first-algebra letters concatenate under phi_1 while each
second-algebra letter contributes its own phi_2 factor.  The two-state
(conditionally free) product is defined by a centering rule instead: on
words whose letters are centered for the psi functionals, phi factors
letterwise.  :class:`CFreeEvaluator` turns that rule into a recursion,

    value(w) = psi(w_i) * value(w with letter i removed, neighbors merged)
               + value(w with letter i centered),

splitting at the first letter that is not yet psi-centered; fully centered
words hit the product base case.  Centered constant terms are constructed
so the centering test is exact in both rational and floating arithmetic,
results are memoized on canonical words, and the word length is capped to
keep the expansion bounded.

Specializations: psi_i = phi_i gives the free product, psi_i = delta
(vanishing on all generator powers) the boolean product, and
(psi_1, psi_2) = (delta, phi_2) reproduces the monotone product exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iter_product

from .errors import DomainError

__all__ = [
    "Word",
    "MomentFunctional",
    "monotone_eval",
    "cfree_eval",
    "CFreeEvaluator",
    "canonical_words",
    "monotone_specialization_defect",
]

_MAX_WORD_LEN = 16


@dataclass(frozen=True)
class Word:
    """Letters (algebra, power) with algebra in {1, 2} and power >= 0.

    Canonical form merges adjacent letters from the same algebra (powers
    add) and drops power-0 letters, so adjacent algebra indices alternate.
    The empty word is the unit.
    """

    letters: tuple

    def __init__(self, letters):
        norm = []
        for alg, power in letters:
            alg = int(alg)
            power = int(power)
            if alg not in (1, 2):
                raise ValueError("algebra index must be 1 or 2")
            if power < 0:
                raise ValueError("letter powers must be >= 0")
            norm.append((alg, power))
        object.__setattr__(self, "letters", tuple(norm))

    def canonical(self) -> "Word":
        merged = []
        for alg, power in self.letters:
            if power == 0:
                continue
            if merged and merged[-1][0] == alg:
                merged[-1] = (alg, merged[-1][1] + power)
            else:
                merged.append((alg, power))
        return Word(tuple(merged))

    def swapped(self) -> "Word":
        """The word with the two algebra labels exchanged."""
        return Word(tuple((3 - alg, power) for alg, power in self.letters))

    def __len__(self):
        return len(self.letters)


class MomentFunctional:
    """Unital linear functional on one generator, given by moments m_1..m_N.

    Values may be ints, Fractions, floats or complex; m_0 = 1 implicitly.
    """

    __slots__ = ("moments",)

    def __init__(self, moments):
        self.moments = tuple(moments)

    @classmethod
    def delta(cls) -> "MomentFunctional":
        """The functional vanishing on every positive generator power."""
        return _DeltaFunctional()

    def __call__(self, k: int):
        if k == 0:
            return 1
        if k <= len(self.moments):
            return self.moments[k - 1]
        raise DomainError(
            f"moment of order {k} required but only {len(self.moments)} stored"
        )

    def __repr__(self):
        return f"MomentFunctional(n={len(self.moments)})"


class _DeltaFunctional(MomentFunctional):
    """delta(x^k) = 0 for every k >= 1, with no order bound."""

    def __init__(self):
        super().__init__(())

    def __call__(self, k: int):
        return 1 if k == 0 else 0

    def __repr__(self):
        return "MomentFunctional.delta()"


def monotone_eval(word: Word, phi1: MomentFunctional, phi2: MomentFunctional):
    """Monotone product functional on a word.

    Equals phi_1 at the total first-algebra power times the product of
    phi_2 over the individual second-algebra letters.
    """
    w = word.canonical()
    total_left = sum(p for alg, p in w.letters if alg == 1)
    val = phi1(total_left)
    for alg, p in w.letters:
        if alg == 2:
            val = val * phi2(p)
    return val


class CFreeEvaluator:
    """Evaluator for the two-state product functional with a shared memo.

    Reuse one instance to evaluate many words against the same four
    functionals; canonical subwords repeat heavily across a sweep and the
    memo is keyed on them.
    """

    def __init__(self, phi1, psi1, phi2, psi2, max_word_len: int = _MAX_WORD_LEN):
        self._phi = {1: phi1, 2: phi2}
        self._psi = {1: psi1, 2: psi2}
        self.max_word_len = max_word_len
        self._memo = {}

    def eval(self, word: Word):
        w = word.canonical()
        if len(w) > self.max_word_len:
            raise DomainError(
                f"word length {len(w)} exceeds the expansion cap {self.max_word_len}"
            )
        state = tuple((alg, (0,) * p + (1,)) for alg, p in w.letters)
        return self._value(state)

    # letters are polynomials in the generator; index = power, monic by
    # construction, so merged letters never collapse to scalars
    def _value(self, state):
        if not state:
            return 1
        if len(state) == 1:
            alg, poly = state[0]
            return self._apply(self._phi[alg], poly)
        hit = self._memo.get(state)
        if hit is not None:
            return hit
        split = -1
        for i, (alg, poly) in enumerate(state):
            tail = self._psi_tail(alg, poly)
            scalar = poly[0] + tail
            if scalar != 0:
                split = i
                break
        if split < 0:
            val = 1
            for alg, poly in state:
                val = val * self._apply(self._phi[alg], poly)
        else:
            # poly = scalar*1 + centered, psi(centered) = 0 exactly because
            # its constant term is literally -tail
            centered = (-tail,) + poly[1:]
            keep = state[:split] + ((alg, centered),) + state[split + 1 :]
            drop = _merge(state[:split], state[split + 1 :])
            val = scalar * self._value(drop) + self._value(keep)
        self._memo[state] = val
        return val

    def _psi_tail(self, alg, poly):
        psi = self._psi[alg]
        tail = 0
        for k in range(1, len(poly)):
            if poly[k] != 0:
                tail = tail + poly[k] * psi(k)
        return tail

    @staticmethod
    def _apply(functional, poly):
        val = poly[0]
        for k in range(1, len(poly)):
            if poly[k] != 0:
                val = val + poly[k] * functional(k)
        return val


def _merge(left, right):
    if left and right and left[-1][0] == right[0][0]:
        alg = left[-1][0]
        joined = (alg, _poly_mul(left[-1][1], right[0][1]))
        return left[:-1] + (joined,) + right[1:]
    return left + right


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            if cb != 0:
                out[i + j] = out[i + j] + ca * cb
    return tuple(out)


def cfree_eval(word: Word, phi1, psi1, phi2, psi2):
    """One-shot two-state product evaluation (see :class:`CFreeEvaluator`)."""
    return CFreeEvaluator(phi1, psi1, phi2, psi2).eval(word)


def canonical_words(max_len: int, max_power: int):
    """All canonical alternating words up to the given length and power."""
    for length in range(1, max_len + 1):
        for start in (1, 2):
            algebras = [start if i % 2 == 0 else 3 - start for i in range(length)]
            for powers in _iter_product(range(1, max_power + 1), repeat=length):
                yield Word(tuple(zip(algebras, powers)))


def monotone_specialization_defect(phi1, phi2, max_len: int = 8, max_power: int = 4):
    """Sweep the identity cfree(phi1, delta; phi2, phi2) = monotone(phi1, phi2).

    Returns (max absolute defect, words checked).  With rational moments
    the defect is exactly zero.
    """
    evaluator = CFreeEvaluator(phi1, MomentFunctional.delta(), phi2, phi2)
    worst = 0
    count = 0
    for word in canonical_words(max_len, max_power):
        lhs = evaluator.eval(word)
        rhs = monotone_eval(word, phi1, phi2)
        d = abs(lhs - rhs)
        if d > worst:
            worst = d
        count += 1
    return worst, count

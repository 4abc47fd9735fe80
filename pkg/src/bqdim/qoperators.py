"""Weighted-shift operator calculus on sequence spaces.

Operators act on finitely supported sequences indexed by N ("N" slots) or
Z ("Z" slots).  A single term maps e_k to c(k) * e_{k-d}, where d is the
shift degree (so the plain left shift S has degree +1 and its adjoint
degree -1) and c is a symbolic coefficient

    c = const * (1+q^2)^(h/2) * q^(a*N+b) * prod_i sqrt(1 - q^(a_i*N+b_i)).

Coefficients stay symbolic under composition (the number operator is
shifted by the accumulated degree), so products of table operators remain
exactly representable.  On an N slot a term vanishes on e_k whenever
k - d < 0; a radical whose exponent vanishes makes the whole coefficient
zero before any negativity check, which is what keeps compositions of the
boundary-vanishing shifts exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

UNILATERAL = "N"
BILATERAL = "Z"

_MERGE_TOL = 1e-13
DROP_TOL = 1e-12


class QDomainError(ValueError):
    """A radical 1 - q^(a k + b) was evaluated where it is negative."""


def _round_complex(z: complex, digits: int = 12) -> complex:
    re = round(z.real, digits) + 0.0   # normalise -0.0
    im = round(z.imag, digits) + 0.0
    return complex(re, im)


@dataclass(frozen=True)
class Coefficient:
    """Symbolic product coefficient; see the module docstring."""

    const: complex = 1.0 + 0j
    qa: int = 0
    qb: int = 0
    h: int = 0
    radicals: tuple[tuple[int, int], ...] = ()

    def shifted(self, s: int) -> "Coefficient":
        """Substitute N -> N + s."""
        if s == 0:
            return self
        return Coefficient(self.const, self.qa, self.qb + self.qa * s, self.h,
                           tuple(sorted((a, b + a * s) for a, b in self.radicals)))

    def conjugate(self) -> "Coefficient":
        return Coefficient(self.const.conjugate(), self.qa, self.qb, self.h,
                           self.radicals)

    def times(self, other: "Coefficient") -> "Coefficient":
        return Coefficient(self.const * other.const,
                           self.qa + other.qa, self.qb + other.qb,
                           self.h + other.h,
                           tuple(sorted(self.radicals + other.radicals)))

    def scaled(self, z: complex) -> "Coefficient":
        return Coefficient(self.const * z, self.qa, self.qb, self.h, self.radicals)

    def evaluate(self, k: int, q: float) -> complex:
        # exact integer test first: a vanishing radicand short-circuits to 0
        # before any negative radicand can raise
        exps = [a * k + b for a, b in self.radicals]
        if any(m == 0 for m in exps):
            return 0j
        if any(m < 0 for m in exps):
            raise QDomainError(
                f"negative radicand exponent at index {k}: {self.radicals}")
        value = self.const * q ** (self.qa * k + self.qb)
        if self.h:
            value *= (1.0 + q * q) ** (self.h / 2.0)
        for m in exps:
            value *= math.sqrt(1.0 - q ** m)
        return value

    def structure_key(self):
        return (self.qa, self.qb, self.h, self.radicals)

    def monomials(self, q: float) -> list[tuple[tuple, complex]]:
        """Expansion into structurally independent monomials at fixed q.

        Repeated radical atoms are expanded via r^2 = 1 - q^(aN+b), so each
        returned structure key (qa, odd-multiplicity radical tuple) carries
        squarefree radical content only; such monomials are linearly
        independent functions of the index.  Constant factors (q^qb and the
        sqrt(1+q^2) power) are folded into the value.
        """
        base = self.const * (1.0 + q * q) ** (self.h / 2.0) * q ** self.qb
        counts: dict[tuple[int, int], int] = {}
        for atom in self.radicals:
            counts[atom] = counts.get(atom, 0) + 1
        expanded: list[tuple[int, list, complex]] = [(self.qa, [], base)]
        for (a, b), mult in sorted(counts.items()):
            pairs, odd = divmod(mult, 2)
            if odd:
                expanded = [(qa, rads + [(a, b)], val)
                            for qa, rads, val in expanded]
            for _ in range(pairs):
                nxt = []
                for qa, rads, val in expanded:
                    nxt.append((qa, rads, val))
                    nxt.append((qa + a, rads, -val * q ** b))
                expanded = nxt
        out: dict[tuple, complex] = {}
        for qa, rads, val in expanded:
            key = (qa, tuple(sorted(rads)))
            out[key] = out.get(key, 0j) + val
        return [(k, v) for k, v in sorted(out.items(), key=lambda kv: kv[0])
                if v != 0]

    def full_key(self):
        return (self.qa, self.qb, self.h, self.radicals,
                repr(_round_complex(self.const)))

    def render(self, var: str = "N") -> str:
        bits = []
        c = self.const
        if c != 1:
            bits.append(_fmt_complex(c))
        if self.h:
            bits.append(f"(1+q^2)^{{{self.h}/2}}" if self.h != 2 else "(1+q^2)")
        if self.qa or self.qb:
            bits.append(f"q^{{{_fmt_linear(self.qa, self.qb, var)}}}")
        for a, b in self.radicals:
            bits.append(f"sqrt(1-q^{{{_fmt_linear(a, b, var)}}})")
        return "*".join(bits) if bits else "1"


def _fmt_linear(a: int, b: int, var: str) -> str:
    if a == 0:
        return str(b)
    head = var if a == 1 else f"{a}{var}"
    if b == 0:
        return head
    return f"{head}{b:+d}"


def _fmt_complex(z: complex) -> str:
    if z.imag == 0:
        v = z.real
        if v == int(v):
            return str(int(v))
        return repr(v)
    return repr(z)


ONE = Coefficient()


@dataclass(frozen=True)
class WeightedShiftSum:
    """A finite sum of shift terms on one sequence-space slot."""

    space: str
    terms: tuple[tuple[int, Coefficient], ...] = ()

    def __post_init__(self):
        if self.space not in (UNILATERAL, BILATERAL):
            raise ValueError(f"unknown space kind {self.space!r}")

    def canonical(self) -> "WeightedShiftSum":
        merged: dict[tuple, tuple[int, Coefficient]] = {}
        for d, c in self.terms:
            key = (d, c.structure_key())
            if key in merged:
                prev = merged[key][1]
                merged[key] = (d, Coefficient(prev.const + c.const, c.qa, c.qb,
                                              c.h, c.radicals))
            else:
                merged[key] = (d, c)
        total = sum(abs(c.const) for _, c in merged.values()) or 1.0
        kept = [(d, c) for d, c in merged.values()
                if abs(c.const) > _MERGE_TOL * total]
        kept.sort(key=lambda t: (t[0], t[1].structure_key()))
        return WeightedShiftSum(self.space, tuple(kept))

    def is_zero(self) -> bool:
        return not self.terms

    def compose(self, other: "WeightedShiftSum") -> "WeightedShiftSum":
        """Operator product self o other (other applied first)."""
        if self.space != other.space:
            raise ValueError("space mismatch")
        terms = []
        for d2, c2 in other.terms:
            for d1, c1 in self.terms:
                terms.append((d1 + d2, c2.times(c1.shifted(-d2))))
        return WeightedShiftSum(self.space, tuple(terms)).canonical()

    def add(self, other: "WeightedShiftSum") -> "WeightedShiftSum":
        if self.space != other.space:
            raise ValueError("space mismatch")
        return WeightedShiftSum(self.space, self.terms + other.terms).canonical()

    def adjoint(self) -> "WeightedShiftSum":
        terms = tuple((-d, c.conjugate().shifted(d)) for d, c in self.terms)
        return WeightedShiftSum(self.space, terms).canonical()

    def scaled(self, z: complex) -> "WeightedShiftSum":
        return WeightedShiftSum(self.space,
                                tuple((d, c.scaled(z)) for d, c in self.terms)
                                ).canonical()

    def apply_index(self, k: int, q: float) -> list[tuple[int, complex]]:
        """Images of e_k: list of (target index, amplitude)."""
        out = []
        for d, c in self.terms:
            tgt = k - d
            if self.space == UNILATERAL and tgt < 0:
                continue
            amp = c.evaluate(k, q)
            if amp != 0:
                out.append((tgt, amp))
        return out

    def key(self):
        return (self.space,) + tuple((d, c.full_key()) for d, c in self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for d, c in self.terms:
            if d > 0:
                head = c.shifted(d).render()
                shift = "S" if d == 1 else f"S^{d}"
                bits.append(f"{head}*{shift}" if head != "1" else shift)
            elif d < 0:
                shift = "S*" if d == -1 else f"S*^{-d}"
                tail = c.render()
                bits.append(f"{shift}*{tail}" if tail != "1" else shift)
            else:
                bits.append(c.render() if c.render() != "1" else "I")
        return " + ".join(bits)


def identity_shift(space: str = UNILATERAL) -> WeightedShiftSum:
    return WeightedShiftSum(space, ((0, ONE),))


def shift_down(space: str = UNILATERAL) -> WeightedShiftSum:
    """The left shift S: e_k -> e_{k-1}."""
    return WeightedShiftSum(space, ((1, ONE),))


def shift_up(space: str = UNILATERAL) -> WeightedShiftSum:
    """The adjoint shift: e_k -> e_{k+1}."""
    return WeightedShiftSum(space, ((-1, ONE),))


def q_power(a: int, b: int, space: str = UNILATERAL) -> WeightedShiftSum:
    """Diagonal operator q^(aN+b)."""
    return WeightedShiftSum(space, ((0, Coefficient(qa=a, qb=b)),))


def sqrt_radical(a: int, b: int, space: str = UNILATERAL) -> WeightedShiftSum:
    """Diagonal operator sqrt(1 - q^(aN+b))."""
    return WeightedShiftSum(space, ((0, Coefficient(radicals=((a, b),))),))


def sqrt_one_plus_q2(power: int = 1, space: str = UNILATERAL) -> WeightedShiftSum:
    """Diagonal scalar (1+q^2)^(power/2)."""
    return WeightedShiftSum(space, ((0, Coefficient(h=power)),))


def constant(z: complex, space: str = UNILATERAL) -> WeightedShiftSum:
    return WeightedShiftSum(space, ((0, Coefficient(const=z)),))


def product(*factors: WeightedShiftSum) -> WeightedShiftSum:
    """Operator product in written order (rightmost factor applied first)."""
    out = factors[0]
    for f in factors[1:]:
        out = out.compose(f)
    return out


# ---------------------------------------------------------------------------
# tensor operators and sparse vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TensorOperator:
    """Finite sum of scaled elementary tensors of weighted-shift sums."""

    signature: tuple[str, ...]
    summands: tuple[tuple[complex, tuple[WeightedShiftSum, ...]], ...] = ()

    def canonical(self) -> "TensorOperator":
        collected: dict[tuple, tuple[complex, tuple[WeightedShiftSum, ...]]] = {}
        for scalar, factors in self.summands:
            if len(factors) != len(self.signature):
                raise ValueError("factor count does not match signature")
            norm_factors = []
            for f in factors:
                f = f.canonical()
                if f.is_zero():
                    scalar = 0.0
                    break
                if len(f.terms) == 1:
                    d, c = f.terms[0]
                    scalar *= c.const
                    f = WeightedShiftSum(f.space, ((d, c.scaled(1.0 / c.const)),))
                norm_factors.append(f)
            if scalar == 0:
                continue
            key = tuple(f.key() for f in norm_factors)
            if key in collected:
                prev_scalar, _ = collected[key]
                collected[key] = (prev_scalar + scalar, tuple(norm_factors))
            else:
                collected[key] = (scalar, tuple(norm_factors))
        total = sum(abs(s) for s, _ in collected.values()) or 1.0
        kept = [(s, f) for s, f in collected.values()
                if abs(s) > _MERGE_TOL * total]
        kept.sort(key=lambda sf: tuple(f.key() for f in sf[1]))
        return TensorOperator(self.signature, tuple(kept))

    def is_zero(self) -> bool:
        return not self.summands

    def key(self):
        return (self.signature,
                tuple((repr(_round_complex(s)),) + tuple(f.key() for f in fs)
                      for s, fs in self.summands))

    def render(self) -> str:
        if not self.summands:
            return "0"
        bits = []
        for scalar, factors in self.summands:
            leg = " (x) ".join(_bracket(f.render()) for f in factors) or "1"
            if scalar == 1:
                bits.append(leg)
            elif scalar == -1:
                bits.append(f"-{leg}")
            else:
                bits.append(f"{_fmt_complex(scalar)}*{leg}")
        return " + ".join(bits)


def _bracket(s: str) -> str:
    return f"({s})" if " + " in s else s


def zero_operator(signature: Iterable[str]) -> TensorOperator:
    return TensorOperator(tuple(signature), ())


def identity_operator(signature: Iterable[str]) -> TensorOperator:
    sig = tuple(signature)
    return TensorOperator(sig, ((1.0 + 0j, tuple(identity_shift(s) for s in sig)),))


def scalar_operator(signature: Iterable[str], z: complex) -> TensorOperator:
    sig = tuple(signature)
    if z == 0:
        return zero_operator(sig)
    return TensorOperator(sig, ((complex(z), tuple(identity_shift(s) for s in sig)),))


def elementary_tensor(factors: Iterable[WeightedShiftSum],
                      scalar: complex = 1.0) -> TensorOperator:
    fs = tuple(factors)
    return TensorOperator(tuple(f.space for f in fs),
                          ((complex(scalar), fs),)).canonical()


def add(*ops: TensorOperator) -> TensorOperator:
    sig = ops[0].signature
    summands = []
    for op in ops:
        if op.signature != sig:
            raise ValueError("signature mismatch")
        summands.extend(op.summands)
    return TensorOperator(sig, tuple(summands)).canonical()


def scale(z: complex, op: TensorOperator) -> TensorOperator:
    return TensorOperator(op.signature,
                          tuple((s * z, fs) for s, fs in op.summands)).canonical()


def tensor(a: TensorOperator, b: TensorOperator) -> TensorOperator:
    summands = []
    for s1, f1 in a.summands:
        for s2, f2 in b.summands:
            summands.append((s1 * s2, f1 + f2))
    return TensorOperator(a.signature + b.signature, tuple(summands)).canonical()


def compose(a: TensorOperator, b: TensorOperator) -> TensorOperator:
    """Operator product a o b (b applied first)."""
    if a.signature != b.signature:
        raise ValueError("signature mismatch")
    summands = []
    for s1, f1 in a.summands:
        for s2, f2 in b.summands:
            factors = tuple(x.compose(y) for x, y in zip(f1, f2))
            if any(f.is_zero() for f in factors):
                continue
            summands.append((s1 * s2, factors))
    return TensorOperator(a.signature, tuple(summands)).canonical()


def adjoint(op: TensorOperator) -> TensorOperator:
    summands = tuple((s.conjugate(), tuple(f.adjoint() for f in fs))
                     for s, fs in op.summands)
    return TensorOperator(op.signature, summands).canonical()


@dataclass
class SparseVector:
    """Finitely supported vector on a tensor product of sequence spaces."""

    signature: tuple[str, ...]
    entries: dict[tuple[int, ...], complex] = field(default_factory=dict)

    def copy(self) -> "SparseVector":
        return SparseVector(self.signature, dict(self.entries))

    def norm_inf(self) -> float:
        return max((abs(v) for v in self.entries.values()), default=0.0)

    def cleaned(self, tol: float = DROP_TOL) -> "SparseVector":
        # purely relative to the vector's own scale: witness products have
        # geometrically small but genuinely nonzero amplitudes
        scale_ = self.norm_inf()
        if scale_ == 0:
            return SparseVector(self.signature, {})
        kept = {k: v for k, v in self.entries.items() if abs(v) > tol * scale_}
        return SparseVector(self.signature, kept)


def vacuum(signature: Iterable[str]) -> SparseVector:
    sig = tuple(signature)
    return SparseVector(sig, {tuple(0 for _ in sig): 1.0 + 0j})


def basis_vector(signature: Iterable[str], index: Iterable[int]) -> SparseVector:
    sig = tuple(signature)
    idx = tuple(index)
    for s, i in zip(sig, idx):
        if s == UNILATERAL and i < 0:
            raise ValueError(f"negative index {i} on a unilateral slot")
    return SparseVector(sig, {idx: 1.0 + 0j})


def apply_operator(op: TensorOperator, vec: SparseVector, q: float) -> SparseVector:
    if op.signature != vec.signature:
        raise ValueError("signature mismatch")
    out: dict[tuple[int, ...], complex] = {}
    for idx, amp in vec.entries.items():
        for scalar, factors in op.summands:
            # per-slot images, then the cartesian product across slots
            slot_images = []
            dead = False
            for slot, f in enumerate(factors):
                imgs = f.apply_index(idx[slot], q)
                if not imgs:
                    dead = True
                    break
                slot_images.append(imgs)
            if dead:
                continue
            partial = [((), amp * scalar)]
            for imgs in slot_images:
                partial = [(t + (j,), a * c) for t, a in partial for j, c in imgs]
            for t, a in partial:
                out[t] = out.get(t, 0j) + a
    return SparseVector(vec.signature, out).cleaned()


def inner(u: SparseVector, v: SparseVector) -> complex:
    """Hermitian inner product, conjugate-linear in the first argument."""
    return sum(a.conjugate() * v.entries.get(k, 0j) for k, a in u.entries.items())


# ---------------------------------------------------------------------------
# window evaluation
# ---------------------------------------------------------------------------

def _slot_profile(f: WeightedShiftSum, d: int, c: Coefficient, cutoff: int,
                  q: float) -> np.ndarray:
    """Coefficient of one term over all window indices of a slot."""
    if f.space == UNILATERAL:
        ks = range(0, cutoff + 1)
    else:
        ks = range(-cutoff, cutoff + 1)
    out = np.zeros(len(ks), dtype=complex)
    for pos, k in enumerate(ks):
        if f.space == UNILATERAL and k - d < 0:
            continue
        out[pos] = c.evaluate(k, q)
    return out


def window_profiles(op: TensorOperator, cutoff: int, q: float
                    ) -> dict[tuple[int, ...], np.ndarray]:
    """Dense action on the index window, grouped by shift pattern.

    Returns a map from shift vectors (d_1, ..., d_m) to arrays A with
    A[k_1, ..., k_m] = amplitude of e_{k-d} in op(e_k).  Window indices on a
    bilateral slot run from -cutoff to cutoff (array offset +cutoff).
    """
    groups: dict[tuple[int, ...], list[list[np.ndarray]]] = {}
    for scalar, factors in op.summands:
        term_lists = []
        for f in factors:
            term_lists.append(list(f.terms))
        # cartesian product over per-slot terms
        stack = [((), [])]
        for slot, f in enumerate(factors):
            nxt = []
            for shifts, profs in stack:
                for d, c in term_lists[slot]:
                    nxt.append((shifts + (d,),
                                profs + [_slot_profile(f, d, c, cutoff, q)]))
            stack = nxt
        for shifts, profs in stack:
            profs = [profs[0] * scalar] + profs[1:] if profs else profs
            groups.setdefault(shifts, []).append(profs)
    out: dict[tuple[int, ...], np.ndarray] = {}
    for shifts, atom_list in groups.items():
        if not atom_list:
            continue
        nslots = len(shifts)
        letters = "abcdefghijklmnop"[:nslots]
        spec = ",".join(f"z{ch}" for ch in letters) + "->" + letters
        stacked = [np.stack([atom[i] for atom in atom_list])
                   for i in range(nslots)]
        out[shifts] = np.einsum(spec, *stacked)
    return out


def _scalar_window_value(op: TensorOperator) -> complex:
    # signature-free operators are plain scalars
    return sum(s for s, _ in op.summands)


def max_window_deviation(a: TensorOperator, b: TensorOperator, cutoff: int,
                         q: float) -> float:
    """max over window basis vectors e_k of ||(a-b) e_k||_inf."""
    if a.signature != b.signature:
        raise ValueError("signature mismatch")
    if not a.signature:
        return abs(_scalar_window_value(a) - _scalar_window_value(b))
    pa = window_profiles(a, cutoff, q)
    pb = window_profiles(b, cutoff, q)
    dev = 0.0
    for shifts in set(pa) | set(pb):
        pr_a = pa.get(shifts)
        pr_b = pb.get(shifts)
        if pr_a is None:
            diff = np.abs(pr_b)
        elif pr_b is None:
            diff = np.abs(pr_a)
        else:
            diff = np.abs(pr_a - pr_b)
        if diff.size:
            dev = max(dev, float(diff.max()))
    return dev


def window_magnitude(op: TensorOperator, cutoff: int, q: float) -> float:
    if not op.signature:
        return abs(_scalar_window_value(op))
    mag = 0.0
    for arr in window_profiles(op, cutoff, q).values():
        if arr.size:
            mag = max(mag, float(np.abs(arr).max()))
    return mag


# ---------------------------------------------------------------------------
# structural monomial expansion
# ---------------------------------------------------------------------------

def monomial_decomposition(op: TensorOperator, q: float) -> dict:
    """Expansion of an operator over structurally independent monomials.

    A monomial key is a per-slot tuple (shift degree, q-power slope,
    squarefree radical content); see Coefficient.monomials.  Within one
    slot all radical atoms share one leading coefficient (each slot is
    driven by a single alphabet letter), so distinct keys are linearly
    independent as operators: an operator vanishes iff every returned
    coefficient does, and ranks of expansions equal ranks of operators.
    """
    flat: dict[tuple, complex] = {}
    for scalar, factors in op.summands:
        stack: list[tuple[tuple, complex]] = [((), scalar)]
        for f in factors:
            nxt = []
            for d, c in f.terms:
                for struct, val in c.monomials(q):
                    for key, amp in stack:
                        nxt.append((key + ((d,) + struct,), amp * val))
            stack = nxt
        for key, amp in stack:
            flat[key] = flat.get(key, 0j) + amp
    return {k: v for k, v in flat.items() if v != 0}


def _monomial_window_max(slot_key: tuple, space: str, cutoff: int,
                         q: float) -> float:
    d, qa, radicals = slot_key
    best = 0.0
    ks = range(0, cutoff + 1) if space == UNILATERAL else \
        range(-cutoff, cutoff + 1)
    for k in ks:
        if space == UNILATERAL and k - d < 0:
            continue
        val = q ** (qa * k)
        ok = True
        for a, b in radicals:
            mexp = a * k + b
            if mexp == 0:
                val = 0.0
                break
            if mexp < 0:
                ok = False
                break
            val *= math.sqrt(1.0 - q ** mexp)
        if ok:
            best = max(best, abs(val))
    return best


def window_deviation_bound(op: TensorOperator, cutoff: int, q: float) -> float:
    """Upper bound on the window magnitude via the monomial expansion.

    Sharp for functionally zero operators (their expansion collapses), so
    relation checks can skip the dense window evaluation when this bound
    is already below tolerance."""
    if not op.signature:
        return abs(_scalar_window_value(op))
    cache: dict[tuple, float] = {}
    total = 0.0
    for key, coeff in monomial_decomposition(op, q).items():
        prod = abs(coeff)
        for slot, slot_key in enumerate(key):
            ck = (op.signature[slot], slot_key)
            if ck not in cache:
                cache[ck] = _monomial_window_max(slot_key, op.signature[slot],
                                                 cutoff, q)
            prod *= cache[ck]
            if prod == 0.0:
                break
        total += prod
    return total


def equal_on_window(a: TensorOperator, b: TensorOperator, cutoff: int,
                    q: float, tol: float = 1e-8) -> bool:
    """True iff the window actions agree to tol, relative to the magnitude."""
    dev = max_window_deviation(a, b, cutoff, q)
    mag = max(window_magnitude(a, cutoff, q), window_magnitude(b, cutoff, q))
    return dev < tol * (1.0 + mag)


# ---------------------------------------------------------------------------
# q arithmetic
# ---------------------------------------------------------------------------

def q_number(n: int, q: float) -> float:
    """[n]_q = (q^n - q^-n) / (q - q^-1)."""
    if n == 0:
        return 0.0
    return (q ** n - q ** (-n)) / (q - 1.0 / q)


def q_factorial(n: int, q: float) -> float:
    out = 1.0
    for j in range(1, n + 1):
        out *= q_number(j, q)
    return out


def q_binomial(n: int, m: int, q: float) -> float:
    """Gaussian binomial via the balanced q-factorials."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    return q_factorial(n, q) / (q_factorial(m, q) * q_factorial(n - m, q))

"""Generator-image tables for the odd orthogonal quantized function algebra.

A table maps a generator position (k, l) (k the upper index, l the lower)
to the operator image of v_l^k under a representation.  Elementary tables
attach weighted shifts to one sequence-space slot; the torus table is
scalar; arbitrary representations are built by convolving tables through
the matrix coproduct

    (A * B)(k, l) = sum_j A(k, j) (x) B(j, l).

Numerical verifiers check the quadratic orthogonality relations (with the
antidiagonal metric fixed below), the reflection-equation relations as a
diagnostic, and equality of tables built from different words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import qoperators as qo
from .qoperators import TensorOperator, WeightedShiftSum

Word = tuple[int, ...]


@dataclass(frozen=True)
class RepSpec:
    """Data selecting one of the standard irreducible modules."""

    n: int
    word: Word
    t: tuple[complex, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rank must be >= 1")
        for i in self.word:
            if not 1 <= i <= self.n:
                raise ValueError(f"word letter {i} out of range 1..{self.n}")
        if self.t is not None:
            if len(self.t) != self.n:
                raise ValueError("torus point must have n entries")
            for z in self.t:
                if abs(abs(z) - 1.0) > 1e-12:
                    raise ValueError(f"torus entry {z} is not unit modulus")

    @property
    def torus(self) -> tuple[complex, ...]:
        return self.t if self.t is not None else tuple([1.0 + 0j] * self.n)


@dataclass
class GeneratorImageTable:
    """Sparse map (k, l) -> operator image of v_l^k; absent entries are 0."""

    n: int
    signature: tuple[str, ...]
    images: dict[tuple[int, int], TensorOperator] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    def entry(self, k: int, l: int) -> TensorOperator:
        if not (1 <= k <= self.size and 1 <= l <= self.size):
            raise ValueError(f"index ({k},{l}) out of range 1..{self.size}")
        op = self.images.get((k, l))
        if op is None:
            return qo.zero_operator(self.signature)
        return op

    def row(self, k: int) -> list[tuple[int, TensorOperator]]:
        return [(l, op) for (kk, l), op in sorted(self.images.items()) if kk == k]

    def set(self, k: int, l: int, op: TensorOperator) -> None:
        op = op.canonical()
        if not op.is_zero():
            self.images[(k, l)] = op


# ---------------------------------------------------------------------------
# elementary and torus tables
# ---------------------------------------------------------------------------

def _lower_block_entries() -> dict[str, WeightedShiftSum]:
    """Operators of the rank-one doubled-parameter pattern (letters i < n)."""
    return {
        "alpha_dn": qo.product(qo.sqrt_radical(4, 4), qo.shift_down()),
        "alpha_up": qo.product(qo.shift_up(), qo.sqrt_radical(4, 4)),
        "q2n": qo.q_power(2, 0),
        "q2n2": qo.q_power(2, 2),
    }


def _middle_block_entries() -> dict[str, WeightedShiftSum]:
    """Operators of the central three-node block (letter i = n)."""
    sq = qo.sqrt_one_plus_q2(1)
    rad = qo.sqrt_radical(2, 2)
    return {
        "alpha2_dn": qo.product(qo.sqrt_radical(2, 2), qo.sqrt_radical(2, 4),
                                qo.shift_down(), qo.shift_down()),
        "alpha2_up": qo.product(qo.shift_up(), qo.shift_up(),
                                qo.sqrt_radical(2, 4), qo.sqrt_radical(2, 2)),
        "mid": qo.identity_shift().add(
            qo.product(qo.sqrt_one_plus_q2(2), qo.q_power(2, 0)).scaled(-1)),
        "beta_dn_lo": qo.product(qo.q_power(1, 0), sq, rad, qo.shift_down()),
        "beta_dn_hi": qo.product(qo.q_power(1, 1), sq, rad,
                                 qo.shift_down()).scaled(-1),
        "beta_up_lo": qo.product(qo.shift_up(), sq, rad, qo.q_power(1, 0)),
        "beta_up_hi": qo.product(qo.shift_up(), sq, rad,
                                 qo.q_power(1, 1)).scaled(-1),
        "q2n": qo.q_power(2, 0),
        "q2n2": qo.q_power(2, 2),
    }


def elementary_table(i: int, n: int) -> GeneratorImageTable:
    """Image table of the representation attached to the i-th reflection.

    The two off-diagonal entries of the middle block that raise the node
    index carry a minus sign; this is the sign choice under which the
    orthogonality relations hold exactly (see verify_orthogonality).
    """
    if not 1 <= i <= n:
        raise ValueError(f"reflection index {i} out of range 1..{n}")
    size = 2 * n + 1
    table = GeneratorImageTable(n, ("N",))
    one = [qo.identity_shift()]

    def put(k, l, wss, sign=1):
        table.set(k, l, qo.elementary_tensor([wss], scalar=sign))

    if i < n:
        ops = _lower_block_entries()
        lo, hi = i, 2 * n - i + 1
        active = {lo, lo + 1, hi, hi + 1}
        put(lo, lo, ops["alpha_dn"])
        put(lo, lo + 1, ops["q2n2"], -1)
        put(lo + 1, lo, ops["q2n"])
        put(lo + 1, lo + 1, ops["alpha_up"])
        put(hi, hi, ops["alpha_dn"])
        put(hi, hi + 1, ops["q2n2"])
        put(hi + 1, hi, ops["q2n"], -1)
        put(hi + 1, hi + 1, ops["alpha_up"])
    else:
        ops = _middle_block_entries()
        active = {n, n + 1, n + 2}
        put(n, n, ops["alpha2_dn"])
        put(n, n + 1, ops["beta_dn_hi"])
        put(n, n + 2, ops["q2n2"])
        put(n + 1, n, ops["beta_dn_lo"])
        put(n + 1, n + 1, ops["mid"])
        put(n + 1, n + 2, ops["beta_up_hi"])
        put(n + 2, n, ops["q2n"])
        put(n + 2, n + 1, ops["beta_up_lo"])
        put(n + 2, n + 2, ops["alpha2_up"])
    for k in range(1, size + 1):
        if k not in active:
            table.set(k, k, qo.elementary_tensor(one))
    return table


def torus_scalars(t: tuple[complex, ...], n: int) -> list[complex]:
    """Diagonal scalars of the torus character at nodes 1..2n+1."""
    out = []
    for k in range(1, 2 * n + 2):
        if k < n + 1:
            out.append(complex(t[k - 1]).conjugate())
        elif k == n + 1:
            out.append(1.0 + 0j)
        else:
            out.append(complex(t[2 * n + 2 - k - 1]))
    return out


def torus_table(t: tuple[complex, ...], n: int) -> GeneratorImageTable:
    """One-dimensional table: node k carries a unit scalar."""
    for z in t:
        if abs(abs(z) - 1.0) > 1e-12:
            raise ValueError(f"torus entry {z} is not unit modulus")
    table = GeneratorImageTable(n, ())
    for k, c in enumerate(torus_scalars(tuple(t), n), start=1):
        table.set(k, k, qo.scalar_operator((), c))
    return table


def convolve(a: GeneratorImageTable, b: GeneratorImageTable) -> GeneratorImageTable:
    """Matrix coproduct of tables: (a*b)(k,l) = sum_j a(k,j) (x) b(j,l)."""
    if a.n != b.n:
        raise ValueError("rank mismatch")
    out = GeneratorImageTable(a.n, a.signature + b.signature)
    rows_b: dict[int, list[tuple[int, TensorOperator]]] = {}
    for (j, l), op in b.images.items():
        rows_b.setdefault(j, []).append((l, op))
    acc: dict[tuple[int, int], list[TensorOperator]] = {}
    for (k, j), op_a in a.images.items():
        for l, op_b in rows_b.get(j, ()):
            acc.setdefault((k, l), []).append(qo.tensor(op_a, op_b))
    for (k, l), terms in acc.items():
        out.set(k, l, qo.add(*terms))
    return out


def rep_table(spec: RepSpec) -> GeneratorImageTable:
    """Fold of the torus table with the elementary tables of the word."""
    table = torus_table(spec.torus, spec.n)
    for i in spec.word:
        table = convolve(table, elementary_table(i, spec.n))
    return table


def star_image(table: GeneratorImageTable, k: int, l: int) -> TensorOperator:
    """Image of the involute of v_l^k, realised as the operator adjoint."""
    return qo.adjoint(table.entry(k, l))


# ---------------------------------------------------------------------------
# relation verification
# ---------------------------------------------------------------------------

def metric_weights(n: int, q: float) -> list[complex]:
    """Weights of the antidiagonal pairing: node k carries eps_k q^{e_k} with
    e = (0, 2, ..., 2n-2, 2n-1, 2n, ..., 4n-2) and eps = -1 at the middle
    node only."""
    out: list[complex] = []
    for k in range(1, 2 * n + 2):
        if k <= n:
            e, eps = 2 * (k - 1), 1.0
        elif k == n + 1:
            e, eps = 2 * n - 1, -1.0
        else:
            e, eps = 2 * (k - 2), 1.0
        out.append(eps * q ** e)
    return out


@dataclass
class RelationReport:
    max_deviation: float
    worst: tuple | None = None
    details: list = field(default_factory=list)

    def ok(self, tol: float) -> bool:
        return self.max_deviation < tol


def verify_orthogonality(table: GeneratorImageTable, cutoff: int, q: float,
                         tol: float = 1e-8) -> RelationReport:
    """Evaluate both families of quadratic orthogonality relations.

    With c the metric weights, N = 2n+1 and k' = N+1-k, the families are

        sum_k c_k  v_k^i  v_{k'}^{j'}  =  c_i delta_{ij}
        sum_k c_k  v_i^k  v_j^{k'}    =  c_i delta_{i'j}

    entrywise as operators.  Returns the maximal window deviation over all
    (i, j) and both families.
    """
    n, size = table.n, table.size
    c = metric_weights(n, q)
    report = RelationReport(0.0)
    sig = table.signature
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            for fam in (1, 2):
                terms = []
                for k in range(1, size + 1):
                    kp = size + 1 - k
                    if fam == 1:
                        a = table.entry(i, k)
                        b = table.entry(size + 1 - j, kp)
                    else:
                        a = table.entry(k, i)
                        b = table.entry(kp, j)
                    if a.is_zero() or b.is_zero():
                        continue
                    terms.append(qo.scale(c[k - 1], qo.compose(a, b)))
                if fam == 1:
                    rhs = c[i - 1] if i == j else 0.0
                else:
                    rhs = c[i - 1] if (size + 1 - i) == j else 0.0
                lhs = qo.add(*terms) if terms else qo.zero_operator(sig)
                rel = qo.add(lhs, qo.scale(-rhs, qo.identity_operator(sig)))
                # the cheap structural bound is sharp for vanishing
                # relations; fall back to the dense window otherwise
                dev = qo.window_deviation_bound(rel, cutoff, q)
                if dev >= tol:
                    dev = qo.window_magnitude(rel, cutoff, q)
                if dev > report.max_deviation:
                    report.max_deviation = dev
                    report.worst = (fam, i, j)
    return report


def _halfinteger_weights(n: int) -> list[Fraction]:
    rho = []
    for i in range(1, 2 * n + 2):
        if i <= n:
            rho.append(Fraction(2 * n + 1, 2) - i)
        elif i == n + 1:
            rho.append(Fraction(0))
        else:
            rho.append(-(Fraction(2 * n + 1, 2) - (2 * n + 2 - i)))
    return rho


def r_matrix_entries(n: int, q: float) -> dict[tuple[int, int, int, int], float]:
    """Nonzero entries R^{ij}_{mn} of the literal two-case reflection matrix.

    Shipped for the diagnostic check only; the transcription in circulation
    is suspect, so nothing gates on it.
    """
    size = 2 * n + 1
    rho = _halfinteger_weights(n)
    ent: dict[tuple[int, int, int, int], float] = {}

    def qp(x: Fraction) -> float:
        return q ** float(x)

    for i in range(1, size + 1):
        ip = size + 1 - i
        for j in range(1, size + 1):
            for m in range(1, size + 1):
                for nn in range(1, size + 1):
                    val = 0.0
                    if i == m and j == nn:
                        val += q ** ((1 if i == j else 0) - (1 if i + j == size + 1 else 0))
                    if i > m:
                        extra = 0.0
                        if j == m and i == nn:
                            extra += 1.0
                        if i == j and m == nn:
                            extra -= qp(-rho[j - 1] - rho[m - 1])
                        val += (q - 1.0 / q) * extra
                    if val:
                        ent[(i, j, m, nn)] = val
    return ent


def verify_frt(table: GeneratorImageTable, cutoff: int, q: float,
               tol: float = 1e-8, max_report: int = 10) -> RelationReport:
    """Diagnostic evaluation of the quadratic exchange relations.

    For each (i, j, s, t) forms sum_{k,l} [ R^{ji}_{kl} v_s^k v_t^l
    - R^{lk}_{st} v_k^i v_l^j ] and reports window deviations; offending
    quadruples are collected rather than gated on.
    """
    n, size = table.n, table.size
    R = r_matrix_entries(n, q)
    by_upper: dict[tuple[int, int], list[tuple[int, int, float]]] = {}
    for (a, b, m, nn), val in R.items():
        by_upper.setdefault((a, b), []).append((m, nn, val))
    report = RelationReport(0.0)
    sig = table.signature
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            for s in range(1, size + 1):
                for t in range(1, size + 1):
                    terms = []
                    for k, l, val in by_upper.get((j, i), ()):
                        a = table.entry(k, s)
                        b = table.entry(l, t)
                        if a.is_zero() or b.is_zero():
                            continue
                        terms.append(qo.scale(val, qo.compose(a, b)))
                    for k in range(1, size + 1):
                        a = table.entry(i, k)
                        if a.is_zero():
                            continue
                        for l in range(1, size + 1):
                            b = table.entry(j, l)
                            if b.is_zero():
                                continue
                            val = R.get((l, k, s, t))
                            if val:
                                terms.append(qo.scale(-val, qo.compose(a, b)))
                    if not terms:
                        continue
                    rel = qo.add(*terms)
                    dev = qo.window_magnitude(rel, cutoff, q)
                    if dev > report.max_deviation:
                        report.max_deviation = dev
                        report.worst = (i, j, s, t)
                    if dev > tol and len(report.details) < max_report:
                        report.details.append(((i, j, s, t), dev))
    return report


def tables_equal(a: GeneratorImageTable, b: GeneratorImageTable, cutoff: int,
                 q: float, tol: float = 1e-8) -> tuple[bool, float]:
    """Entrywise window comparison of two tables of equal signature."""
    if a.n != b.n or a.signature != b.signature:
        raise ValueError("tables are not comparable")
    worst = 0.0
    for k in range(1, a.size + 1):
        for l in range(1, a.size + 1):
            dev = qo.max_window_deviation(a.entry(k, l), b.entry(k, l),
                                          cutoff, q)
            worst = max(worst, dev)
    return worst < tol, worst


def verify_braid_independence(spec1: RepSpec, spec2: RepSpec, cutoff: int,
                              q: float, tol: float = 1e-8) -> tuple[bool, float]:
    """Compare the tables of two words required to define the same element."""
    from . import weylb
    if spec1.n != spec2.n:
        raise ValueError("rank mismatch")
    w1 = weylb.from_word(spec1.word, spec1.n)
    w2 = weylb.from_word(spec2.word, spec2.n)
    if w1 != w2:
        raise ValueError("words evaluate to different group elements")
    if len(spec1.word) != len(spec2.word):
        raise ValueError("words have different lengths")
    return tables_equal(rep_table(spec1), rep_table(spec2), cutoff, q, tol)

"""Parameter-feasibility sieve for G-block-transitive 3-(v, k, 1) designs.

For a candidate (T, T_alpha) and each admitted prime power q this computes
v = |T : T_alpha|, applies the gcd inequality

    gcd(|T_alpha|, (v-1)(v-2)) * |Out(T)| > sqrt(v) - 2,

then enumerates block sizes k with k - 2 | v - 2 and k < sqrt(v) + 2 and keeps
those passing the divisibility conditions

    (k-1)(k-2) | (v-1)(v-2)
    k(k-1)(k-2) | v(v-1)(v-2)
    (v-1)(v-2) | k(k-1)(k-2) |T_alpha| |Out(T)|

plus, when subdegrees d of T_alpha are known,

    (v-1)(v-2) | f k(k-1)(k-2) d(d-1)     and     f gcd(d(d-1), (v-1)(v-2)) > sqrt(v) - 2.

All comparisons with sqrt(v) are done in integers.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from .arith import (
    DEFAULT_RHO_BUDGET,
    FactorizationBudgetExceeded,
    PrimePower,
    divisors,
    prime_power,
)
from .catalog import CandidateEntry
from .polycert import (
    GcdCertificate,
    QPoly,
    poly_cauchy_root_bound,
    poly_fujiwara_root_bound,
    poly_print,
    poly_xgcd_cert,
)

__all__ = [
    "DEFAULT_QCAP",
    "DesignParams",
    "Condition",
    "SubdegreeCheck",
    "SieveVerdict",
    "SieveReport",
    "InequalityResult",
    "design_params",
    "exceeds_sqrt_minus_two",
    "candidate_ks",
    "check_k",
    "gb_order",
    "subdegree_check",
    "stab_certificate",
    "subdegree_certificates",
    "inequality_holds",
    "q_root_bound",
    "inequality_range",
    "solve_q_inequality",
    "sieve_q",
    "sieve_candidate",
]

DEFAULT_QCAP = 10**5


@dataclass(frozen=True)
class DesignParams:
    """Counting parameters of a putative 3-(v, k, 1) design (exact rationals)."""

    v: int
    k: int
    lambda1: Fraction
    lambda2: Fraction
    b: Fraction
    t: int = 3

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for x in (self.lambda1, self.lambda2, self.b))


def design_params(v: int, k: int) -> DesignParams:
    if v < 4 or not 2 < k < v:
        raise ValueError(f"need v >= 4 and 2 < k < v, got v={v}, k={k}")
    return DesignParams(
        v=v,
        k=k,
        lambda1=Fraction((v - 1) * (v - 2), (k - 1) * (k - 2)),
        lambda2=Fraction(v - 2, k - 2),
        b=Fraction(v * (v - 1) * (v - 2), k * (k - 1) * (k - 2)),
    )


def exceeds_sqrt_minus_two(x: int, v: int) -> bool:
    """Exact test of ``x > sqrt(v) - 2``."""
    return x + 2 > 0 and (x + 2) ** 2 > v


def candidate_ks(v: int, budget: int = DEFAULT_RHO_BUDGET) -> list[int]:
    """Block sizes 3 < k < sqrt(v) + 2 with (k - 2) | (v - 2)."""
    if v < 5:
        raise ValueError("candidate_ks needs v >= 5")
    # k - 2 < sqrt(v)  <=>  (k - 2)^2 < v
    return [d + 2 for d in divisors(v - 2, budget) if d >= 2 and d * d < v]


class Condition(str, enum.Enum):
    PASS = "pass"
    K1 = "eq:k1"  # k < sqrt(v) + 2
    K2 = "eq:k2"  # (k-1)(k-2) | (v-1)(v-2)
    K3 = "eq:k3"  # k(k-1)(k-2) | v(v-1)(v-2)
    K4 = "eq:k4"  # (v-1)(v-2) | k(k-1)(k-2) |T_alpha| |Out|


def check_k(v: int, k: int, stab_order: int, out_bound: int) -> Condition:
    """First failing block-size condition, or ``Condition.PASS``."""
    if not 2 < k < v:
        raise ValueError("need 2 < k < v")
    if (k - 2) ** 2 >= v:
        return Condition.K1
    vv = (v - 1) * (v - 2)
    kk = (k - 1) * (k - 2)
    if vv % kk:
        return Condition.K2
    if (v * vv) % (k * kk):
        return Condition.K3
    if (k * kk * stab_order * out_bound) % vv:
        return Condition.K4
    return Condition.PASS


def gb_order(v: int, k: int, galpha_order: int) -> Fraction:
    """|G_B| = |G_alpha| k(k-1)(k-2) / ((v-1)(v-2))."""
    if not 2 < k < v:
        raise ValueError("need 2 < k < v")
    return Fraction(galpha_order * k * (k - 1) * (k - 2), (v - 1) * (v - 2))


class SubdegreeCheck(NamedTuple):
    part_a: bool
    part_b: bool

    @property
    def passed(self) -> bool:
        return self.part_a and self.part_b

    @property
    def failure(self) -> Optional[str]:
        if not self.part_b:
            return "part_b"
        if not self.part_a:
            return "part_a"
        return None


def subdegree_check(v: int, d: int, k: int, f: int) -> SubdegreeCheck:
    """(a) (v-1)(v-2) | f k(k-1)(k-2) d(d-1);  (b) f gcd(d(d-1), (v-1)(v-2)) > sqrt(v) - 2."""
    if d <= 1 or not 2 < k < v or f < 1:
        raise ValueError("need d > 1, 2 < k < v, f >= 1")
    vv = (v - 1) * (v - 2)
    dd = d * (d - 1)
    part_a = (f * k * (k - 1) * (k - 2) * dd) % vv == 0
    part_b = exceeds_sqrt_minus_two(f * math.gcd(dd, vv), v)
    return SubdegreeCheck(part_a, part_b)


# ---------------------------------------------------------------------------
# the q inequality


def _vv_poly(entry: CandidateEntry) -> QPoly:
    v = entry.v_poly
    return (v - 1) * (v - 2)


def stab_certificate(entry: CandidateEntry) -> GcdCertificate:
    """Certificate bounding gcd(|T_alpha|(q), (v-1)(v-2)(q))."""
    return poly_xgcd_cert(entry.stab_order, _vv_poly(entry))


def subdegree_certificates(entry: CandidateEntry) -> list[GcdCertificate]:
    """Certificates bounding gcd(d(d-1), (v-1)(v-2)) for each known subdegree d."""
    vv = _vv_poly(entry)
    return [poly_xgcd_cert(d * (d - 1), vv) for d in entry.subdegrees]


def inequality_holds(cert: GcdCertificate, v: int, q: int, f_bound: int) -> bool:
    """Exact ``|r1(q)| * f_bound > sqrt(v) - 2``; a zero r1(q) bounds nothing."""
    r = cert.r1(q)
    if r == 0:
        return True
    return exceeds_sqrt_minus_two(abs(r) * f_bound, v)


def q_root_bound(p: QPoly) -> int:
    """Integer M exceeding |root| for every root of ``p``: best of Cauchy and Fujiwara."""
    return min(poly_cauchy_root_bound(p), poly_fujiwara_root_bound(p))


class InequalityResult(NamedTuple):
    feasible: list[PrimePower]
    bound: Union[int, str]  # Q0, or "user-capped" when the user cap decided the range
    examined: list[PrimePower]


def inequality_range(entry: CandidateEntry, cert: GcdCertificate,
                     qcap: Optional[int] = None) -> tuple[int, Union[int, str]]:
    """(qmax, bound): every q > qmax provably fails the certificate inequality.

    When deg v > 2 (deg r1 + 1), H = v - (c q r1 + 2)^2 has a positive leading
    coefficient and, since e <= q, the inequality fails for every q beyond the
    real roots of H and r1; that bound Q0 is returned.  Otherwise ``qcap`` must
    be given.
    """
    c = entry.out_coeff
    v = entry.v_poly
    r1 = cert.r1
    if entry.is_fixed:
        q = entry.q_constraints.q_fixed
        return q, q
    if v.degree > 2 * (r1.degree + 1):
        h = v - (QPoly((0, c)) * r1 + 2) ** 2
        assert h.lead > 0
        q0 = max(q_root_bound(h), q_root_bound(r1) if r1.degree > 0 else 0, 2)
        if qcap is not None and qcap < q0 - 1:
            return qcap, "user-capped"
        return q0 - 1, q0
    if qcap is None:
        raise ValueError(
            f"{entry.id}: deg v = {v.degree} <= 2(deg r1 + 1) = {2 * (r1.degree + 1)}; "
            "the inequality has no finite bound, give a q cap"
        )
    return qcap, "user-capped"


def solve_q_inequality(entry: CandidateEntry, cert: GcdCertificate,
                       qcap: Optional[int] = None) -> InequalityResult:
    """Admitted prime powers q for which ``r1(q) * c * e > sqrt(v(q)) - 2``.

    Every admitted q up to the bound from :func:`inequality_range` is tested
    exactly.
    """
    qmax, bound = inequality_range(entry, cert, qcap)
    examined = list(entry.q_constraints.admitted(qmax))
    c = entry.out_coeff
    feasible = [pp for pp in examined if inequality_holds(cert, entry.v(pp.q), pp.q, c * pp.e)]
    return InequalityResult(feasible, bound, examined)


# ---------------------------------------------------------------------------
# per-q verdicts and reports


@dataclass(frozen=True)
class SieveVerdict:
    q: PrimePower
    v: int
    excluded_by: Optional[str] = None  # "inequality_k_minus_1" | "no_k_survives"
    surviving_ks: tuple[tuple[int, Fraction], ...] = ()  # (k, |G_B| bound)
    error: Optional[str] = None

    @property
    def ks(self) -> list[int]:
        return [k for k, _ in self.surviving_ks]

    def as_dict(self) -> dict:
        out = {"q": self.q.q, "p": self.q.p, "e": self.q.e, "v": str(self.v)}
        if self.error is not None:
            out["error"] = self.error
        elif self.excluded_by is not None:
            out["excluded_by"] = self.excluded_by
        else:
            out["surviving_ks"] = [{"k": k, "gb_order": str(g)} for k, g in self.surviving_ks]
        return out


def sieve_q(entry: CandidateEntry, pp: PrimePower, check_inequality: bool = True,
            budget: int = DEFAULT_RHO_BUDGET) -> SieveVerdict:
    """Full condition evaluation at one q."""
    q, f = pp.q, entry.out_bound(pp)
    v = entry.v(q)
    stab = entry.stab_order(q)
    subdegs = [d(q) for d in entry.subdegrees]
    vv = (v - 1) * (v - 2)
    if check_inequality:
        if not exceeds_sqrt_minus_two(math.gcd(stab, vv) * f, v) or any(
            not exceeds_sqrt_minus_two(f * math.gcd(d * (d - 1), vv), v) for d in subdegs if d > 1
        ):
            return SieveVerdict(pp, v, excluded_by="inequality_k_minus_1")
    try:
        ks = candidate_ks(v, budget)
    except FactorizationBudgetExceeded as exc:
        return SieveVerdict(pp, v, error=str(exc))
    survivors = []
    for k in ks:
        if check_k(v, k, stab, f) is not Condition.PASS:
            continue
        if any(not subdegree_check(v, d, k, f).passed for d in subdegs if d > 1):
            continue
        survivors.append((k, gb_order(v, k, stab * f)))
    if not survivors:
        return SieveVerdict(pp, v, excluded_by="no_k_survives")
    return SieveVerdict(pp, v, surviving_ks=tuple(survivors))


@dataclass(frozen=True)
class SieveReport:
    candidate: str
    checksum: str
    qcap: Optional[int]
    qmax_bound: Union[int, str]
    certificate: GcdCertificate
    subdegree_certificates: tuple[GcdCertificate, ...]
    verdicts: tuple[SieveVerdict, ...]
    q_range: tuple[int, int] = (0, 0)

    def survivors(self) -> list[tuple[int, int]]:
        return [(vd.q.q, k) for vd in self.verdicts for k in vd.ks]

    def survivors_by_q(self) -> dict[int, list[int]]:
        return {vd.q.q: vd.ks for vd in self.verdicts if vd.surviving_ks}

    def errors(self) -> list[SieveVerdict]:
        return [vd for vd in self.verdicts if vd.error is not None]

    def as_dict(self) -> dict:
        return {
            "candidate": self.candidate,
            "catalog_checksum": self.checksum,
            "qcap": self.qcap,
            "qmax_bound": self.qmax_bound,
            "q_range": list(self.q_range),
            "certificate": self.certificate.as_dict(),
            "subdegree_certificates": [c.as_dict() for c in self.subdegree_certificates],
            "verdicts": [vd.as_dict() for vd in self.verdicts],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"


def _sieve_task(args):
    entry, pp, budget = args
    return sieve_q(entry, pp, check_inequality=False, budget=budget)


def sieve_candidate(entry: CandidateEntry, qcap: Optional[int] = None, workers: int = 1,
                    budget: int = DEFAULT_RHO_BUDGET, qmin: int = 2) -> SieveReport:
    """Run the inequality and the block-size conditions over the admitted q.

    Every certificate (stabilizer, then each subdegree) gives a necessary
    inequality; the q range is the tightest bound among them, else ``qcap``,
    else ``DEFAULT_QCAP``.  Every examined q gets a verdict: either excluded by
    some certificate inequality, or the outcome of the block-size conditions.
    """
    cert = stab_certificate(entry)
    sub_certs = subdegree_certificates(entry)
    best = None
    for c in [cert, *sub_certs]:
        try:
            rng = inequality_range(entry, c, qcap)
        except ValueError:
            continue
        if best is None or rng[0] < best[0]:
            best = rng
    if best is None:
        # no certificate bounds q: the default cap applies
        best = (DEFAULT_QCAP, "user-capped")
    qmax, bound = best
    examined = list(entry.q_constraints.admitted(qmax, qmin))

    def passes_all(pp: PrimePower) -> bool:
        v, f = entry.v(pp.q), entry.out_bound(pp)
        return all(inequality_holds(c, v, pp.q, f) for c in [cert, *sub_certs])

    feasible = [pp for pp in examined if passes_all(pp)]
    feasible_set = {pp.q for pp in feasible}
    work = [(entry, pp, budget) for pp in feasible]
    if workers > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            computed = list(pool.map(_sieve_task, work, chunksize=8))
    else:
        computed = [_sieve_task(w) for w in work]
    by_q = {vd.q.q: vd for vd in computed}
    verdicts = []
    for pp in examined:
        if pp.q in feasible_set:
            verdicts.append(by_q[pp.q])
        else:
            verdicts.append(SieveVerdict(pp, entry.v(pp.q), excluded_by="inequality_k_minus_1"))
    verdicts.sort(key=lambda vd: vd.q.q)
    q_range = (examined[0].q, examined[-1].q) if examined else (0, 0)
    return SieveReport(
        candidate=entry.id,
        checksum=entry.checksum(),
        qcap=qcap,
        qmax_bound=bound,
        certificate=cert,
        subdegree_certificates=tuple(sub_certs),
        verdicts=tuple(verdicts),
        q_range=q_range,
    )


def admitted_prime_power(q: int) -> PrimePower:
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    return pp

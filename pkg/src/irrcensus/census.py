"""Census of principal ideals: exact irreducible-divisor and divisor counts.

Ideals of norm <= x are enumerated by depth-first search over the prime
sites in increasing norm order, carrying exponent stacks and running
class/omega state so each node costs O(1) beyond its own statistics.  The
irreducible-divisor count nu is computed three independent ways (per-class
subset-count products, exhaustive sub-multiset search, and a
squarefull/squarefree split), which the tests hold to exact agreement.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .abelian import (
    ClassOrdering,
    GroupSpec,
    StructuralConstants,
    TypeVector,
    canonical_ordering,
    structural_constants,
)
from .errors import DomainError, ResourceLimitError
from .quadratic import ClassGroup, FieldSpec, PrimeSite, class_group, prime_sites_up_to
from .synth import SynthModel, synth_sites

DEFAULT_BRUTE_OMEGA_BOUND = 24
DEFAULT_DIVISOR_BOUND = 10**6

#: Fixed number of merge shards.  Work is always partitioned this way no
#: matter how many threads execute it, so float accumulators merge in the
#: same order and output files are byte-identical for any --threads value.
MERGE_SHARDS = 16


class FactorEntry(NamedTuple):
    site_id: int
    norm: int
    class_index: int
    exponent: int


@dataclass(frozen=True)
class Factorization:
    """A nonzero ideal as a sorted tuple of prime-site powers."""

    entries: tuple[FactorEntry, ...]
    norm: int
    class_index: int


@dataclass(frozen=True)
class CensusRecord:
    """Derived statistics of one principal ideal."""

    norm: int
    omega: tuple[int, ...]
    Omega: tuple[int, ...]
    nu: int
    nu_by_type: dict
    delta: int
    is_irreducible: bool
    squarefull_norm: int


@dataclass(frozen=True, eq=False)
class SiteSystem:
    """A class group (abstract) plus a materialized prime-site stream."""

    group: GroupSpec
    ordering: ClassOrdering
    sites: tuple[PrimeSite, ...]
    limit: int
    field: FieldSpec | None = None

    def __post_init__(self):
        for i, s in enumerate(self.sites):
            if s.id != i:
                raise DomainError("site ids must be sequential stream positions")
        norms = tuple(s.norm for s in self.sites)
        if any(a > b for a, b in zip(norms, norms[1:])):
            raise DomainError("sites must be sorted by norm")
        object.__setattr__(self, "_norms", norms)
        object.__setattr__(self, "_cls0", tuple(s.class_index - 1 for s in self.sites))

    @property
    def constants(self) -> StructuralConstants:
        return structural_constants(self.group)


def for_field(field, limit: int) -> SiteSystem:
    """Site system for Q(sqrt(d)); accepts d or a prebuilt ClassGroup."""
    cg = field if isinstance(field, ClassGroup) else class_group(field)
    sites = tuple(prime_sites_up_to(cg, limit))
    return SiteSystem(
        group=cg.group, ordering=cg.ordering, sites=sites, limit=limit, field=cg.field
    )


def for_synth(model: SynthModel, limit: int) -> SiteSystem:
    sites = tuple(synth_sites(model, limit))
    return SiteSystem(
        group=model.group,
        ordering=canonical_ordering(model.group),
        sites=sites,
        limit=limit,
        field=None,
    )


def make_factorization(system: SiteSystem, entries) -> Factorization:
    """Build a Factorization from (site_id, exponent) pairs."""
    built = []
    norm = 1
    cls = system.ordering.identity
    for site_id, exp in sorted(entries):
        if exp < 1:
            raise DomainError("exponents must be >= 1")
        site = system.sites[site_id]
        built.append(FactorEntry(site_id, site.norm, site.class_index, exp))
        norm *= site.norm**exp
        for _ in range(exp):
            cls = system.ordering.add(cls, system.ordering.elements[site.class_index - 1])
    ids = [e.site_id for e in built]
    if len(set(ids)) != len(ids):
        raise DomainError("site ids must be distinct")
    return Factorization(
        entries=tuple(built), norm=norm, class_index=system.ordering.index_of[cls]
    )


def _bounded_subset_counts(exponents, max_degree: int) -> list[int]:
    """Coefficient k of the result counts size-k sub-multisets of a multiset
    whose distinct members have the given multiplicities (truncated)."""
    dp = [0] * (max_degree + 1)
    dp[0] = 1
    for e in exponents:
        ndp = [0] * (max_degree + 1)
        for d in range(max_degree + 1):
            lo = d - e
            if lo < 0:
                lo = 0
            ndp[d] = sum(dp[lo : d + 1])
        dp = ndp
    return dp


def _check_group(fact: Factorization, h: int):
    for en in fact.entries:
        if not 1 <= en.class_index <= h:
            raise DomainError(
                f"factorization class index {en.class_index} does not fit group of order {h}"
            )


def nu_exact(fact: Factorization, sc: StructuralConstants):
    """Exact irreducible-divisor count and its per-type decomposition.

    For type tau, an irreducible divisor of type tau is exactly a choice,
    independently for each class i, of a size-t_i sub-multiset of the class-i
    prime sites of the ideal; the counts multiply.
    """
    h = sc.group.h
    _check_group(fact, h)
    by_class: list[list[int]] = [[] for _ in range(h)]
    for en in fact.entries:
        by_class[en.class_index - 1].append(en.exponent)
    maxt = sc.max_type_component()
    coeffs = [_bounded_subset_counts(by_class[i], maxt[i]) for i in range(h)]
    by_type = {}
    total = 0
    for tv in sorted(sc.types):
        prod = 1
        for i, ti in enumerate(tv.t):
            if ti:
                prod *= coeffs[i][ti]
                if not prod:
                    break
        by_type[tv] = prod
        total += prod
    return total, by_type


def nu_bruteforce(
    fact: Factorization,
    ordering: ClassOrdering,
    max_multiplicity: int = DEFAULT_BRUTE_OMEGA_BOUND,
) -> int:
    """Oracle: enumerate every sub-multiset, keep the principal ones with no
    principal proper nonempty sub-multiset, count them.

    Uses coordinate arithmetic directly (no shared operation table with the
    exact path).
    """
    big_omega = sum(en.exponent for en in fact.entries)
    if big_omega > max_multiplicity:
        raise ResourceLimitError(
            f"Omega={big_omega} exceeds the brute-force bound {max_multiplicity}"
        )
    mods = ordering.group.invariant_factors
    classes = [ordering.elements[en.class_index - 1] for en in fact.entries]
    exps = [en.exponent for en in fact.entries]

    zero_sum = []
    for combo in itertools.product(*(range(e + 1) for e in exps)):
        if not any(combo):
            continue
        total = tuple(
            sum(k * cl[i] for k, cl in zip(combo, classes)) % d
            for i, d in enumerate(mods)
        )
        if not any(total):
            zero_sum.append(combo)
    count = 0
    for v in zero_sum:
        if not any(w != v and all(a <= b for a, b in zip(w, v)) for w in zero_sum):
            count += 1
    return count


def _squarefull_divisor_sum(s_entries, t, u_counts) -> int:
    h = len(t)
    used = [0] * h
    total = 0

    def rec(idx: int):
        nonlocal total
        if idx == len(s_entries):
            prod = 1
            for i in range(h):
                prod *= math.comb(u_counts[i], t[i] - used[i])
                if not prod:
                    return
            total += prod
            return
        en = s_entries[idx]
        ci = en.class_index - 1
        for f in range(min(en.exponent, t[ci] - used[ci]) + 1):
            used[ci] += f
            rec(idx + 1)
            used[ci] -= f

    rec(0)
    return total


def nu_squarefull_formula(fact: Factorization, sc: StructuralConstants) -> int:
    """Third route to nu: split the ideal into squarefull and squarefree
    comaximal parts; a type-tau irreducible factor is a divisor of the
    squarefull part completed by a squarefree cofactor, counted by binomials.
    The class-1 count enters once since (1,0,...,0) is the only type using
    class 1.
    """
    h = sc.group.h
    _check_group(fact, h)
    s_entries = [en for en in fact.entries if en.exponent >= 2]
    u_counts = [0] * h
    omega1 = 0
    for en in fact.entries:
        if en.class_index == 1:
            omega1 += 1
        if en.exponent == 1:
            u_counts[en.class_index - 1] += 1
    total = omega1
    for tv in sc.types:
        if tv.t[0] != 0:
            continue
        total += _squarefull_divisor_sum(s_entries, tv.t, u_counts)
    return total


def delta_exact(
    fact: Factorization,
    ordering: ClassOrdering,
    max_divisors: int = DEFAULT_DIVISOR_BOUND,
) -> int:
    """Number of principal ideal divisors, by dynamic programming over the
    class distribution of divisors (never enumerates them individually)."""
    ndiv = math.prod(en.exponent + 1 for en in fact.entries)
    if ndiv > max_divisors:
        raise ResourceLimitError(
            f"{ndiv} divisors exceed the configured bound {max_divisors}"
        )
    h = len(ordering.elements)
    cay = ordering.cayley()
    vec = [0] * h
    vec[0] = 1
    for en in fact.entries:
        c = en.class_index - 1
        new = [0] * h
        for g, cnt in enumerate(vec):
            if cnt:
                gg = g
                new[gg] += cnt
                for _ in range(en.exponent):
                    gg = cay[gg][c]
                    new[gg] += cnt
        vec = new
    return vec[0]


def delta_bruteforce(fact: Factorization, ordering: ClassOrdering) -> int:
    """Oracle for delta_exact: walk every divisor exponent vector."""
    mods = ordering.group.invariant_factors
    classes = [ordering.elements[en.class_index - 1] for en in fact.entries]
    exps = [en.exponent for en in fact.entries]
    count = 0
    for combo in itertools.product(*(range(e + 1) for e in exps)):
        total = tuple(
            sum(k * cl[i] for k, cl in zip(combo, classes)) % d
            for i, d in enumerate(mods)
        )
        if not any(total):
            count += 1
    return count


def delta_lower_bound(record, h: int) -> int:
    """Constructive lower bound: per class, pick any subset of the distinct
    prime sites whose size is a multiple of h; products are principal."""
    omega = record.omega if hasattr(record, "omega") else tuple(record)
    out = 1
    for w in omega:
        out *= sum(math.comb(w, j) for j in range(0, w + 1, h))
    return out


def is_irreducible(fact: Factorization, sc: StructuralConstants) -> bool:
    """A principal nonunit is irreducible iff its full class distribution is a
    minimal zero-sum vector (no proper nonempty sub-multiset is principal)."""
    if not fact.entries:
        raise DomainError("the unit ideal is neither reducible nor irreducible")
    if fact.class_index != 1:
        raise DomainError("irreducibility is defined for principal ideals")
    h = sc.group.h
    _check_group(fact, h)
    dist = [0] * h
    for en in fact.entries:
        dist[en.class_index - 1] += en.exponent
    if sum(dist) > sc.davenport:
        return False
    return TypeVector(tuple(dist)) in sc.types


# ---------------------------------------------------------------------------
# enumeration


def _principal_walk(system: SiteSystem, x: int, shard: int = 0, stride: int = 1):
    """Yield (norm, entries, omega, Omega) for principal ideals of norm <= x.

    DFS over sites in increasing norm; ``shard``/``stride`` select a subset
    of the top-level branches (the unit ideal belongs to shard 0).
    """
    norms = system._norms
    cls0 = system._cls0
    cay = system.ordering.cayley()
    h = max(system.group.h, 1)
    nsites = len(norms)
    omega = [0] * h
    Omega = [0] * h
    stack: list[list[int]] = []

    def rec(indices, n, c, emit_self):
        if emit_self and c == 0:
            yield (
                n,
                tuple((s[0], s[1]) for s in stack),
                tuple(omega),
                tuple(Omega),
            )
        for j in indices:
            q = norms[j]
            n2 = n * q
            if n2 > x:
                break
            cj = cls0[j]
            omega[cj] += 1
            Omega[cj] += 1
            frame = [j, 1]
            stack.append(frame)
            c2 = cay[c][cj]
            while True:
                yield from rec(range(j + 1, nsites), n2, c2, True)
                n3 = n2 * q
                if n3 > x:
                    break
                n2 = n3
                frame[1] += 1
                Omega[cj] += 1
                c2 = cay[c2][cj]
            Omega[cj] -= frame[1]
            omega[cj] -= 1
            stack.pop()

    yield from rec(range(shard, nsites, stride), 1, 0, shard == 0)


def _record_from_walk(system, sc, norm, entries, omega, Omega) -> tuple:
    fact_entries = tuple(
        FactorEntry(j, system.sites[j].norm, system.sites[j].class_index, e)
        for j, e in entries
    )
    fact = Factorization(entries=fact_entries, norm=norm, class_index=1)
    nu, by_type = nu_exact(fact, sc)
    delta = delta_exact(fact, system.ordering)
    irred = bool(fact.entries) and is_irreducible(fact, sc)
    squarefull = math.prod(
        en.norm**en.exponent for en in fact_entries if en.exponent >= 2
    )
    record = CensusRecord(
        norm=norm,
        omega=omega,
        Omega=Omega,
        nu=nu,
        nu_by_type=by_type,
        delta=delta,
        is_irreducible=irred,
        squarefull_norm=squarefull,
    )
    return fact, record


def enumerate_principal(
    system: SiteSystem, x: int
) -> Iterator[tuple[Factorization, CensusRecord]]:
    """Every principal ideal of norm <= x, DFS order, fully populated."""
    if x < 1:
        raise DomainError("norm bound must be >= 1")
    if x > system.limit:
        raise DomainError(f"x={x} exceeds the site stream limit {system.limit}")
    sc = system.constants
    for norm, entries, omega, Omega in _principal_walk(system, x):
        yield _record_from_walk(system, sc, norm, entries, omega, Omega)


@dataclass(frozen=True)
class HarmonicSums:
    principal: float | Fraction
    irreducible: float | Fraction
    irreducible_count: int


def harmonic_sums(system: SiteSystem, x: int, exact: bool = False) -> HarmonicSums:
    """Reciprocal-norm sums over principal and over irreducible ideals.

    ``exact=True`` accumulates Fractions (only sensible for small x).
    """
    if x > system.limit:
        raise DomainError(f"x={x} exceeds the site stream limit {system.limit}")
    sc = system.constants
    types_set = {tv.t for tv in sc.types}
    count = 0
    if exact:
        total_p = Fraction(0)
        total_i = Fraction(0)
        for norm, entries, omega, Omega in _principal_walk(system, x):
            total_p += Fraction(1, norm)
            if Omega in types_set:
                total_i += Fraction(1, norm)
                count += 1
        return HarmonicSums(total_p, total_i, count)
    kp = _Kahan()
    ki = _Kahan()
    for norm, entries, omega, Omega in _principal_walk(system, x):
        inv = 1.0 / norm
        kp.add(inv)
        if Omega in types_set:
            ki.add(inv)
            count += 1
    return HarmonicSums(kp.value, ki.value, count)


# ---------------------------------------------------------------------------
# aggregated sweep


class _Kahan:
    """Neumaier compensated summation; merge order is fixed by the caller."""

    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, v: float):
        t = self.s + v
        if abs(self.s) >= abs(v):
            self.c += (self.s - t) + v
        else:
            self.c += (v - t) + self.s
        self.s = t

    def merge(self, other: "_Kahan"):
        self.add(other.s)
        self.add(other.c)

    @property
    def value(self) -> float:
        return self.s + self.c


class _Bucket:
    """Counters for ideals whose norm falls in one checkpoint band."""

    __slots__ = (
        "class_counts",
        "nu_counts",
        "profile_counts",
        "g_sums",
        "harm_principal",
        "harm_irred",
        "irred_count",
    )

    def __init__(self, h: int, n_desc: int):
        self.class_counts = [0] * h
        self.nu_counts: dict[int, int] = {}
        self.profile_counts: dict[tuple, int] = {}
        self.g_sums = [_Kahan() for _ in range(n_desc)]
        self.harm_principal = _Kahan()
        self.harm_irred = _Kahan()
        self.irred_count = 0

    def merge(self, other: "_Bucket"):
        for i, v in enumerate(other.class_counts):
            self.class_counts[i] += v
        for k, v in other.nu_counts.items():
            self.nu_counts[k] = self.nu_counts.get(k, 0) + v
        for k, v in other.profile_counts.items():
            self.profile_counts[k] = self.profile_counts.get(k, 0) + v
        for a, b in zip(self.g_sums, other.g_sums):
            a.merge(b)
        self.harm_principal.merge(other.harm_principal)
        self.harm_irred.merge(other.harm_irred)
        self.irred_count += other.irred_count


@dataclass(frozen=True)
class Totals:
    """Cumulative sweep counters at one checkpoint."""

    x: int
    h: int
    class_counts: tuple[int, ...]
    nu_counts: dict
    profile_counts: dict
    g_sums: tuple[float, ...]
    harmonic_principal: float
    harmonic_irreducible: float
    irreducible_count: int

    @property
    def n_principal(self) -> int:
        return sum(self.nu_counts.values())

    @property
    def n_ideals(self) -> int:
        return sum(self.class_counts)


@dataclass(eq=False)
class Sweep:
    """Aggregated census statistics, mergeable across shards and checkpoints."""

    system: SiteSystem
    x: int
    checkpoints: tuple[int, ...]
    g_descriptors: tuple
    _buckets: list

    def at(self, x: int) -> Totals:
        if x not in self.checkpoints:
            raise DomainError(f"{x} is not a sweep checkpoint {self.checkpoints}")
        h = max(self.system.group.h, 1)
        acc = _Bucket(h, len(self.g_descriptors))
        for cp, bucket in zip(self.checkpoints, self._buckets):
            if cp > x:
                break
            acc.merge(bucket)
        return Totals(
            x=x,
            h=h,
            class_counts=tuple(acc.class_counts),
            nu_counts=dict(acc.nu_counts),
            profile_counts=dict(acc.profile_counts),
            g_sums=tuple(k.value for k in acc.g_sums),
            harmonic_principal=acc.harm_principal.value,
            harmonic_irreducible=acc.harm_irred.value,
            irreducible_count=acc.irred_count,
        )


def _normalize_descriptor(desc) -> tuple[tuple[int, int], ...]:
    out = tuple(sorted((int(s), int(e)) for s, e in desc))
    if any(e < 1 for _, e in out):
        raise DomainError("descriptor exponents must be >= 1")
    ids = [s for s, _ in out]
    if len(set(ids)) != len(ids):
        raise DomainError("descriptor sites must be distinct")
    return out


def _shard_sweep(system, x, cps, descs, shard, stride):
    norms = system._norms
    cls0 = system._cls0
    cay = system.ordering.cayley()
    h = max(system.group.h, 1)
    sc = system.constants
    types_tuples = tuple(sorted(tv.t for tv in sc.types))
    types_set = set(types_tuples)
    maxt = sc.max_type_component()
    nsites = len(norms)
    n_desc = len(descs)
    buckets = [_Bucket(h, n_desc) for _ in range(len(cps))]

    # descriptor site data: (site index, g-value if divides, g-value if not)
    desc_info = []
    desc_sites = set()
    for desc in descs:
        entries = []
        for sid, e in desc:
            nq = system.sites[sid].norm
            entries.append((sid, (1.0 - 1.0 / nq) ** e, (-1.0 / nq) ** e))
            desc_sites.add(sid)
        desc_info.append(tuple(entries))
    cur_exp: dict[int, int] = {}

    omega = [0] * h
    Omega = [0] * h
    stack_cls = [0] * 80
    stack_exp = [0] * 80
    by_class: list[list[int]] = [[] for _ in range(h)]
    single_type = h == 1

    def visit(n: int, c: int, depth: int):
        b = buckets[bisect_left(cps, n)]
        b.class_counts[c] += 1
        if c:
            return
        if single_type:
            nuv = omega[0]
        else:
            for lst in by_class:
                lst.clear()
            for si in range(depth):
                by_class[stack_cls[si]].append(stack_exp[si])
            coeffs = [
                _bounded_subset_counts(by_class[i], maxt[i]) for i in range(h)
            ]
            nuv = 0
            for t in types_tuples:
                prod = 1
                for i in range(h):
                    ti = t[i]
                    if ti:
                        prod *= coeffs[i][ti]
                        if not prod:
                            break
                nuv += prod
        b.nu_counts[nuv] = b.nu_counts.get(nuv, 0) + 1
        m = 0
        for i in range(h):
            dv = Omega[i] - omega[i]
            if dv > m:
                m = dv
        key = (tuple(omega), m)
        b.profile_counts[key] = b.profile_counts.get(key, 0) + 1
        inv = 1.0 / n
        b.harm_principal.add(inv)
        if tuple(Omega) in types_set:
            b.irred_count += 1
            b.harm_irred.add(inv)
        for di, entries in enumerate(desc_info):
            prod = 1.0
            for sid, g_in, g_out in entries:
                prod *= g_in if sid in cur_exp else g_out
            b.g_sums[di].add(prod)

    def rec(indices, n, c, depth):
        for j in indices:
            q = norms[j]
            n2 = n * q
            if n2 > x:
                break
            cj = cls0[j]
            tracked = j in desc_sites
            omega[cj] += 1
            Omega[cj] += 1
            stack_cls[depth] = cj
            stack_exp[depth] = 1
            if tracked:
                cur_exp[j] = 1
            e = 1
            c2 = cay[c][cj]
            while True:
                visit(n2, c2, depth + 1)
                rec(range(j + 1, nsites), n2, c2, depth + 1)
                n3 = n2 * q
                if n3 > x:
                    break
                n2 = n3
                e += 1
                stack_exp[depth] = e
                Omega[cj] += 1
                if tracked:
                    cur_exp[j] = e
                c2 = cay[c2][cj]
            Omega[cj] -= e
            omega[cj] -= 1
            if tracked:
                del cur_exp[j]

    if shard == 0:
        visit(1, 0, 0)
    rec(range(shard, nsites, stride), 1, 0, 0)
    return buckets


def sweep(
    system: SiteSystem,
    x: int,
    checkpoints=None,
    g_descriptors=(),
    threads: int = 1,
    shards: int = MERGE_SHARDS,
) -> Sweep:
    """One pass over all ideals of norm <= x, aggregating every statistic the
    reports need, with cumulative snapshots at each checkpoint."""
    if x < 1:
        raise DomainError("norm bound must be >= 1")
    if x > system.limit:
        raise DomainError(f"x={x} exceeds the site stream limit {system.limit}")
    if checkpoints is None:
        cps = (x,)
    else:
        cps = tuple(sorted(set(int(c) for c in checkpoints) | {x}))
        if any(c < 1 or c > x for c in cps):
            raise DomainError("checkpoints must lie in [1, x]")
    descs = tuple(_normalize_descriptor(d) for d in g_descriptors)
    for d in descs:
        for sid, _ in d:
            if sid >= len(system.sites):
                raise DomainError(f"descriptor site id {sid} out of range")

    shard_buckets: list
    if threads <= 1:
        shard_buckets = [
            _shard_sweep(system, x, cps, descs, k, shards) for k in range(shards)
        ]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_shard_sweep, system, x, cps, descs, k, shards)
                for k in range(shards)
            ]
            shard_buckets = [f.result() for f in futures]

    merged = shard_buckets[0]
    for other in shard_buckets[1:]:
        for dst, src in zip(merged, other):
            dst.merge(src)
    return Sweep(
        system=system, x=x, checkpoints=cps, g_descriptors=descs, _buckets=merged
    )


# ---------------------------------------------------------------------------
# CSV output


def census_header(h: int) -> str:
    omega_cols = ",".join(f"omega_{i}" for i in range(1, h + 1))
    Omega_cols = ",".join(f"Omega_{i}" for i in range(1, h + 1))
    return f"norm,class,{omega_cols},{Omega_cols},nu,delta,is_irreducible,squarefull_norm"


def _census_rows(system, sc, x, shard, stride):
    rows = []
    for norm, entries, omega, Omega in _principal_walk(system, x, shard, stride):
        fact, record = _record_from_walk(system, sc, norm, entries, omega, Omega)
        cells = [str(norm), "1"]
        cells.extend(str(v) for v in record.omega)
        cells.extend(str(v) for v in record.Omega)
        cells.append(str(record.nu))
        cells.append(str(record.delta))
        cells.append("1" if record.is_irreducible else "0")
        cells.append(str(record.squarefull_norm))
        rows.append((norm, entries, ",".join(cells)))
    return rows


def write_census_csv(
    system: SiteSystem, x: int, out, threads: int = 1, shards: int = MERGE_SHARDS
) -> int:
    """Write the principal-ideal census, norm-ascending (ties broken by the
    factorization), one row per principal ideal.  Returns the row count."""
    if x > system.limit:
        raise DomainError(f"x={x} exceeds the site stream limit {system.limit}")
    sc = system.constants
    if threads <= 1:
        all_rows = []
        for k in range(shards):
            all_rows.extend(_census_rows(system, sc, x, k, shards))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_census_rows, system, sc, x, k, shards)
                for k in range(shards)
            ]
            all_rows = [row for f in futures for row in f.result()]
    all_rows.sort(key=lambda r: (r[0], r[1]))
    out.write(census_header(system.group.h) + "\n")
    for _, _, line in all_rows:
        out.write(line + "\n")
    return len(all_rows)

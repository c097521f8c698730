"""Randomized, exact checks of density axioms on generated APSets."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .apset import EMPTY, NAT, APSet, affine, ap, intersect, union
from .counterexamples import DICHOTOMY, GAP_SUP, GAP_SUP_POSITIVE, INF_RECIPROCAL
from .density import CANONICAL, LOWER_CANONICAL, DensityFunctional
from .dsl import format_apset, parse_apset

FUNCTIONALS: dict[str, DensityFunctional] = {
    f.name: f
    for f in (CANONICAL, LOWER_CANONICAL, GAP_SUP, GAP_SUP_POSITIVE, DICHOTOMY,
              INF_RECIPROCAL)
}

AXIOMS = ("F1", "F2", "F3", "F4", "F4b", "F5", "F2b", "nonnegativity",
          "image", "finite-null")

MAX_DILATION = 12
MAX_SHIFT = 12
CORNER_RATE = 0.2


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    max_modulus: int = 60
    max_finite: int = 8
    trials: int = 500

    def __post_init__(self):
        if self.seed < 0 or self.max_modulus < 1 or self.max_finite < 1 or self.trials < 1:
            raise ValueError("generator settings must be positive")


def _perturb(rng: random.Random, m: int, residues, n_exc: int, span: int) -> APSet:
    mask = set(residues)
    add, rem = set(), set()
    for x in rng.sample(range(span), min(n_exc, span)):
        (rem if x % m in mask else add).add(x)
    return APSet.from_parts(m, mask, add, rem)


def _corner(rng: random.Random, cfg: GeneratorConfig) -> APSet:
    m = rng.randint(1, cfg.max_modulus)
    kind = rng.randrange(6)
    if kind == 0:
        return rng.choice((EMPTY, NAT))
    if kind == 1:
        size = rng.randint(1, cfg.max_finite)
        return APSet.finite(rng.sample(range(3 * m + 10), size))
    if kind == 2:
        return APSet.periodic(m, [rng.randrange(m)])
    if kind == 3:
        # a progression that starts late, leaving exceptions below its start
        k = rng.randint(1, min(m, MAX_DILATION))
        return ap(k, rng.randint(0, cfg.max_finite))
    if kind == 4:
        size = rng.randint(1, cfg.max_finite)
        return _perturb(rng, 1, [0], size, 2 * m + 10)
    res = rng.sample(range(m), rng.randint(0, m))
    return _perturb(rng, m, res, rng.randint(1, cfg.max_finite), 2 * m + 10)


def _random_apset(rng: random.Random, cfg: GeneratorConfig) -> APSet:
    m = rng.randint(1, cfg.max_modulus)
    p = rng.random()
    res = [r for r in range(m) if rng.random() < p]
    return _perturb(rng, m, res, rng.randint(0, cfg.max_finite), 2 * m + 10)


def generate_apsets(cfg: GeneratorConfig) -> Iterator[APSet]:
    """Deterministic stream of ``cfg.trials`` canonical APSets.

    The stream opens with the empty set and N; afterwards a fifth of the
    draws are edge shapes (finite sets, single classes, late-starting
    progressions, cofinite sets).
    """
    rng = random.Random(cfg.seed)
    for i in range(cfg.trials):
        if i == 0:
            yield EMPTY
        elif i == 1:
            yield NAT
        elif rng.random() < CORNER_RATE:
            yield _corner(rng, cfg)
        else:
            yield _random_apset(rng, cfg)


# ---------------------------------------------------------------------------


def _q(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    trials: int
    witness: dict | None = None

    @property
    def violated(self) -> bool:
        return self.witness is not None

    @property
    def status(self) -> str:
        if self.violated:
            return "violated"
        return f"no violation found in {self.trials} trials"

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "trials": self.trials,
                "violated": self.violated, "status": self.status,
                "witness": self.witness}


@dataclass(frozen=True)
class AxiomReport:
    functional: str
    trials: int
    verdicts: dict[str, AxiomVerdict] = field(default_factory=dict)

    def passed(self, *axioms: str) -> bool:
        return all(not self.verdicts[a].violated for a in (axioms or AXIOMS))

    def violated_axioms(self) -> list[str]:
        return [a for a in AXIOMS if self.verdicts[a].violated]

    def to_json(self) -> dict:
        return {"functional": self.functional, "trials": self.trials,
                "verdicts": [self.verdicts[a].to_json() for a in AXIOMS]}


class _Collector:
    def __init__(self):
        self.trials = {a: 0 for a in AXIOMS}
        self.found: dict[str, list[dict]] = {a: [] for a in AXIOMS}

    def check(self, axiom: str, ok: bool, make_witness):
        self.trials[axiom] += 1
        if not ok:
            self.found[axiom].append(make_witness())

    def verdicts(self) -> dict[str, AxiomVerdict]:
        out = {}
        for a in AXIOMS:
            # lexicographically least witness, so merging is order-free
            wit = min(self.found[a], key=_witness_key, default=None)
            out[a] = AxiomVerdict(a, self.trials[a], wit)
        return out


def _witness_key(w: dict) -> str:
    return json.dumps(w, sort_keys=True)


def _witness(sets, lhs, rhs, relation, **params) -> dict:
    return {"sets": [format_apset(s) for s in sets], "lhs": _q(lhs),
            "rhs": _q(rhs), "relation": relation, **params}


def check_axioms(f: DensityFunctional, cfg: GeneratorConfig) -> AxiomReport:
    """Exact axiom checks of ``f`` over generated sets, pairs and affine images.

    Dilations use ``k <= 12`` and shifts ``1 <= h <= 12``.  F4 is the
    pure dilation ``h = 0``; F5 is the ``k = 1`` slice of F4b.
    """
    sets = list(generate_apsets(cfg))
    rng = random.Random(f"axioms-{cfg.seed}")
    memo: dict[APSet, Fraction] = {}

    def val(a: APSet) -> Fraction:
        if a not in memo:
            memo[a] = Fraction(f.eval(a))
        return memo[a]

    col = _Collector()
    one = Fraction(1)
    col.check("F1", val(NAT) == 1, lambda: _witness([NAT], val(NAT), one, "=="))

    for a in sets:
        va = val(a)
        col.check("nonnegativity", va >= 0, lambda: _witness([a], va, 0, ">="))
        col.check("F2b", va <= 1, lambda: _witness([a], va, 1, "<="))
        col.check("image", 0 <= va <= 1, lambda: _witness([a], va, 1, "in [0,1]"))
        if a.is_finite():
            col.check("finite-null", va == 0, lambda: _witness([a], va, 0, "=="))

        b = sets[rng.randrange(len(sets))]
        vb = val(b)
        u = union(a, b)
        vu = val(u)
        col.check("F2", va <= vu, lambda: _witness([a, u], va, vu, "<="))
        i = intersect(a, b)
        vi = val(i)
        col.check("F2", vi <= va, lambda: _witness([i, a], vi, va, "<="))
        col.check("F3", vu <= va + vb, lambda: _witness([a, b], vu, va + vb, "<="))

        k = rng.randint(2, MAX_DILATION)
        img = val(affine(a, k, 0))
        col.check("F4", img == va / k,
                  lambda: _witness([a], img, va / k, "==", k=k, h=0))
        k, h = rng.randint(1, MAX_DILATION), rng.randint(1, MAX_SHIFT)
        img = val(affine(a, k, h))
        col.check("F4b", img == va / k,
                  lambda: _witness([a], img, va / k, "==", k=k, h=h))
        h = rng.randint(1, MAX_SHIFT)
        img = val(affine(a, 1, h))
        col.check("F5", img == va, lambda: _witness([a], img, va, "==", k=1, h=h))
        col.check("F4b", img == va, lambda: _witness([a], img, va, "==", k=1, h=h))

    for _ in range(max(1, cfg.trials // 5)):
        size = rng.randint(1, cfg.max_finite)
        fin = APSet.finite(rng.sample(range(4 * cfg.max_modulus), size))
        v = val(fin)
        col.check("finite-null", v == 0, lambda: _witness([fin], v, 0, "=="))

    return AxiomReport(f.name, cfg.trials, col.verdicts())


def replay_witness(f: DensityFunctional, axiom: str, witness: dict) -> bool:
    """Re-evaluate a recorded witness; true when the violation reproduces."""
    sets = [parse_apset(t) for t in witness["sets"]]
    v = [Fraction(f.eval(s)) for s in sets]
    k, h = witness.get("k"), witness.get("h")
    if axiom == "F1":
        return v[0] != 1
    if axiom == "nonnegativity":
        return v[0] < 0
    if axiom == "F2b":
        return v[0] > 1
    if axiom == "image":
        return not 0 <= v[0] <= 1
    if axiom == "finite-null":
        return sets[0].is_finite() and v[0] != 0
    if axiom == "F2":
        return intersect(sets[0], sets[1]) == sets[0] and v[0] > v[1]
    if axiom == "F3":
        return Fraction(f.eval(union(sets[0], sets[1]))) > v[0] + v[1]
    if axiom in ("F4", "F4b", "F5"):
        return Fraction(f.eval(affine(sets[0], k, h))) != v[0] / k
    raise ValueError(f"unknown axiom {axiom!r}")


@dataclass(frozen=True)
class WeakDarbouxReport:
    functional: str
    trials: int
    empty_value: Fraction
    witness: str | None = None
    witness_value: Fraction | None = None

    @property
    def refuted(self) -> bool:
        return self.witness is not None

    @property
    def status(self) -> str:
        if self.refuted:
            return "weak Darboux refuted"
        return f"no refutation found in {self.trials} finite sets"

    def to_json(self) -> dict:
        return {"functional": self.functional, "trials": self.trials,
                "empty_value": _q(self.empty_value), "refuted": self.refuted,
                "status": self.status, "witness": self.witness,
                "witness_value": None if self.witness_value is None
                else _q(self.witness_value)}


def check_weak_darboux_consequence(
    f: DensityFunctional, cfg: GeneratorConfig
) -> WeakDarbouxReport:
    """Search finite sets ``F`` with ``f(F) > f(EMPTY)``.

    A set function with the weak intermediate-value property cannot have
    one: a finite set has only finitely many subsets to realize a nonempty
    interval of values.
    """
    rng = random.Random(f"weak-{cfg.seed}")
    candidates = [APSet.finite([x]) for x in range(MAX_SHIFT + 1)]
    candidates += [a for a in generate_apsets(cfg) if a.is_finite()]
    while len(candidates) < cfg.trials:
        size = rng.randint(1, cfg.max_finite)
        candidates.append(APSet.finite(rng.sample(range(4 * cfg.max_modulus), size)))
    base = Fraction(f.eval(EMPTY))
    hits = []
    for c in candidates:
        v = Fraction(f.eval(c))
        if v > base:
            hits.append((len(c.added), sorted(c.added), v, c))
    if not hits:
        return WeakDarbouxReport(f.name, len(candidates), base)
    # report the smallest refuting set
    *_, v, c = min(hits, key=lambda t: t[:2])
    return WeakDarbouxReport(f.name, len(candidates), base, format_apset(c), v)

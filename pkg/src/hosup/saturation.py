"""Given-clause saturation.

Otter-style loop: passive clauses wait in two heaps (by weight and by
age), the given clause moves to the active set and produces inferences
against it.  New clauses are simplified on the way in: trivial and
duplicate literals dropped, rewriting with active unit equations,
tautology and duplicate and subsumption checks.  Every clause that is
stored, and every intermediate form a simplification step produced, is
registered so a refutation can be replayed line by line.
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass
from typing import Optional

from .calculus import Rules
from .clauses import (
    Clause,
    Inference,
    Literal,
    canonical_lits,
    is_tautology,
    remove_trivial_lits,
)
from .ordering import GREATER, KBO
from .terms import Var, first_order_subterms, free_var_ids, replace_at, subst_term
from .unification import match_term


@dataclass
class ProverConfig:
    depth: int = 2
    applicative: bool = False
    selection: str = "paper"
    precedence: str = "frequency"
    age_weight: tuple = (1, 4)
    max_clauses: int = 200000
    max_iterations: int = 20000
    timeout: float = 0.0
    shuffle: Optional[int] = None


@dataclass
class Result:
    status: str  # unsat | saturated | max_clauses | max_iterations | timeout
    empty_cid: Optional[int]
    registry: list
    stats: dict
    elapsed: float

    @property
    def proved(self) -> bool:
        return self.status == "unsat"


# ---------------------------------------------------------------------------
# clause-level helpers

def _strip(lits: tuple) -> tuple:
    out = []
    seen = set()
    for l in remove_trivial_lits(lits):
        if l._key in seen:
            continue
        seen.add(l._key)
        out.append(l)
    return tuple(out)


def _ckey(lits: tuple):
    counts: dict = {}
    for l in canonical_lits(lits):
        counts[l._key] = counts.get(l._key, 0) + 1
    return frozenset(counts.items())


def _weight(lits: tuple) -> int:
    return sum(l.lhs.size + l.rhs.size for l in lits)


def _all_flex_flex(lits: tuple) -> bool:
    return bool(lits) and all(not l.positive and l.flex_flex for l in lits)


def _match_lit(dl: Literal, cl: Literal, tmap, tymap):
    for a, b in ((cl.lhs, cl.rhs), (cl.rhs, cl.lhs)):
        m = match_term(dl.lhs, a, tmap, tymap)
        if m is None:
            continue
        m = match_term(dl.rhs, b, m[0], m[1])
        if m is not None:
            yield m


def subsumes(dlits: tuple, clits: tuple) -> bool:
    """Multiset subsumption: a single substitution maps the first clause
    onto distinct literals of the second."""
    if len(dlits) > len(clits):
        return False

    def bt(k: int, used: frozenset, tmap, tymap) -> bool:
        if k == len(dlits):
            return True
        dl = dlits[k]
        for idx, cl in enumerate(clits):
            if idx in used or cl.positive != dl.positive:
                continue
            for m in _match_lit(dl, cl, tmap, tymap):
                if bt(k + 1, used | {idx}, m[0], m[1]):
                    return True
        return False

    return bt(0, frozenset(), {}, {})


def demod_step(lits: tuple, units: list, ord_: KBO):
    """First rewrite of any first-order subterm with one of the unit
    equations (cid, l, r), provided the instance is oriented.  Returns
    (new lits, unit cid) or None."""
    for li, lit in enumerate(lits):
        for s, other, flip in ((lit.lhs, lit.rhs, False), (lit.rhs, lit.lhs, True)):
            for pos, u in first_order_subterms(s):
                if type(u) is Var:
                    continue
                for ucid, l, r in units:
                    m = match_term(l, u)
                    if m is None:
                        continue
                    rt = subst_term(r, m[0], m[1])
                    if ord_.compare(u, rt) != GREATER:
                        continue
                    news = replace_at(s, pos.path, rt)
                    nl = (
                        Literal(news, other, lit.positive, lit.is_constraint)
                        if not flip
                        else Literal(other, news, lit.positive, lit.is_constraint)
                    )
                    return lits[:li] + (nl,) + lits[li + 1 :], ucid
    return None


def demodulate(lits: tuple, units: list, ord_: KBO):
    """Rewrite with the unit equations to a normal form.  Returns the
    final literals and the list of unit cids applied, in order."""
    used = []
    while True:
        step = demod_step(lits, units, ord_)
        if step is None:
            return lits, used
        lits, ucid = step
        used.append(ucid)


# ---------------------------------------------------------------------------
# the prover

class Prover:
    def __init__(self, ord_: KBO, cfg: Optional[ProverConfig] = None):
        self.cfg = cfg or ProverConfig()
        self.ord = ord_
        self.rules = Rules(
            ord_,
            depth=self.cfg.depth,
            applicative=self.cfg.applicative,
            selection=self.cfg.selection,
        )
        self.registry: list[Inference] = []
        self.active: dict[int, Clause] = {}
        self.passive: dict[int, Clause] = {}
        self._wheap: list = []
        self._aheap: list = []
        self._units: list = []  # (cid, lhs, rhs) both oriented directions
        self.seen: dict = {}
        self.stats: dict = {
            "generated": 0,
            "kept": 0,
            "dup": 0,
            "taut": 0,
            "subsumed": 0,
            "demod_steps": 0,
            "given": 0,
        }
        self._picks = 0
        self._rng = (
            random.Random(self.cfg.shuffle) if self.cfg.shuffle is not None else None
        )

    # -- registry -------------------------------------------------------

    def _register(self, lits: tuple, rule: str, premises: tuple, subst) -> int:
        cid = len(self.registry)
        clause = Clause(lits, cid=cid, rule=rule, premises=premises, subst=subst)
        self.registry.append(Inference(cid, clause, rule, premises, subst))
        return cid

    def clause(self, cid: int) -> Clause:
        return self.registry[cid].clause

    # -- insertion ------------------------------------------------------

    def insert(self, lits, rule: str, premises: tuple = (), subst=None) -> Optional[int]:
        """Simplify, check, store.  Returns the empty clause's id when
        one appears, else None."""
        self.stats["generated"] += 1
        lits0 = tuple(lits)
        lits1 = _strip(lits0)
        steps = []
        cur = lits1
        while True:
            hit = demod_step(cur, self._units, self.ord)
            if hit is None:
                break
            cur = hit[0]
            steps.append(hit)
        lits2 = _strip(cur)

        if lits2 and not _all_flex_flex(lits2):
            if is_tautology(lits2):
                self.stats["taut"] += 1
                return None
            ck = _ckey(lits2)
            if ck in self.seen:
                self.stats["dup"] += 1
                return None
            w = _weight(lits2)
            n = len(lits2)
            for live in (self.active, self.passive):
                for c in live.values():
                    if len(c.lits) <= n and c.weight <= w and subsumes(c.lits, lits2):
                        self.stats["subsumed"] += 1
                        return None

        cid = self._register(lits0, rule, premises, subst)
        if lits1 != lits0:
            cid = self._register(lits1, "triv_simp", (cid,), None)
        for newlits, ucid in steps:
            self.stats["demod_steps"] += 1
            cid = self._register(newlits, "demod", (cid, ucid), None)
        if lits2 != cur:
            cid = self._register(lits2, "triv_simp", (cid,), None)

        if not lits2:
            return cid
        if _all_flex_flex(lits2):
            return self._register((), "flex_flex_simp", (cid,), None)

        clause = self.clause(cid)
        self.seen[_ckey(lits2)] = cid
        self.passive[cid] = clause
        jitter = self._rng.random() if self._rng is not None else 0
        heapq.heappush(self._wheap, (clause.weight, jitter, cid))
        heapq.heappush(self._aheap, cid)
        self.stats["kept"] += 1
        return None

    # -- given clause selection ------------------------------------------

    def _pop_given(self) -> Optional[Clause]:
        na, nw = self.cfg.age_weight
        by_age = na > 0 and self._picks % (na + nw) < na
        self._picks += 1
        while True:
            if by_age:
                if not self._aheap:
                    return None
                cid = heapq.heappop(self._aheap)
            else:
                if not self._wheap:
                    return None
                cid = heapq.heappop(self._wheap)[2]
            c = self.passive.pop(cid, None)
            if c is not None:
                return c

    def _activate(self, clause: Clause):
        self.active[clause.cid] = clause
        if len(clause.lits) == 1 and clause.lits[0].positive:
            lit = clause.lits[0]
            for l, r in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
                lv: set = set()
                rv: set = set()
                free_var_ids(l, lv)
                free_var_ids(r, rv)
                if rv <= lv:
                    self._units.append((clause.cid, l, r))

    # -- the loop ---------------------------------------------------------

    def run(self, inputs: list) -> Result:
        t0 = time.monotonic()
        deadline = t0 + self.cfg.timeout if self.cfg.timeout else None
        order = list(inputs)
        if self._rng is not None:
            self._rng.shuffle(order)
        for c in order:
            lits = c.lits
            if self._rng is not None:
                lits = list(lits)
                self._rng.shuffle(lits)
                lits = tuple(lits)
            # input provenance (if any) predates the registry; drop it here
            e = self.insert(lits, c.rule, (), c.subst)
            if e is not None:
                return self._finish("unsat", e, t0)
        while self.passive:
            if self.stats["given"] >= self.cfg.max_iterations:
                return self._finish("max_iterations", None, t0)
            if len(self.registry) >= self.cfg.max_clauses:
                return self._finish("max_clauses", None, t0)
            if deadline is not None and time.monotonic() > deadline:
                return self._finish("timeout", None, t0)
            given = self._pop_given()
            if given is None:
                break
            self.stats["given"] += 1
            self._activate(given)
            for dr in self.rules.generate(given, list(self.active.values())):
                e = self.insert(dr.lits, dr.rule, dr.premises, dr.subst)
                if e is not None:
                    return self._finish("unsat", e, t0)
                if len(self.registry) >= self.cfg.max_clauses:
                    return self._finish("max_clauses", None, t0)
                # one given clause can generate for a long time
                if deadline is not None and time.monotonic() > deadline:
                    return self._finish("timeout", None, t0)
        return self._finish("saturated", None, t0)

    def _finish(self, status: str, empty_cid: Optional[int], t0: float) -> Result:
        return Result(status, empty_cid, self.registry, dict(self.stats), time.monotonic() - t0)


def saturate(inputs: list, ord_: KBO, cfg: Optional[ProverConfig] = None) -> Result:
    return Prover(ord_, cfg).run(inputs)


# ---------------------------------------------------------------------------
# proofs

def extract_proof(registry: list, cid: int) -> list:
    """Ancestors of the given registry line, oldest first."""
    seen: set = set()
    stack = [cid]
    while stack:
        c = stack.pop()
        if c in seen:
            continue
        seen.add(c)
        stack.extend(registry[c].premises)
    return [registry[c] for c in sorted(seen)]


_GENERATING = {
    "eq_res": "eq_res",
    "eq_fact": "eq_fact",
    "arg_cong": "arg_cong",
    "imitate": "imitate_project",
    "project": "imitate_project",
    "sup": "superpose",
}


def replay(registry: list, cid: int, rules: Rules, ord_: KBO) -> bool:
    """Re-run every inference on the path to `cid` and check each recorded
    conclusion comes back out.  Input lines (no premises) are taken as
    given."""
    for inf in extract_proof(registry, cid):
        if not inf.premises:
            continue
        want = _ckey(inf.clause.lits)
        rule = inf.rule
        if rule == "triv_simp":
            prev = registry[inf.premises[0]].clause.lits
            if _ckey(_strip(prev)) != want:
                return False
        elif rule == "demod":
            pcid, ucid = inf.premises
            prev = registry[pcid].clause.lits
            ulit = registry[ucid].clause.lits[0]
            units = [
                (ucid, l, r)
                for l, r in ((ulit.lhs, ulit.rhs), (ulit.rhs, ulit.lhs))
            ]
            hit = demod_step(prev, units, ord_)
            if hit is None or _ckey(hit[0]) != want:
                return False
        elif rule == "flex_flex_simp":
            prev = registry[inf.premises[0]].clause.lits
            if not _all_flex_flex(prev) or inf.clause.lits != ():
                return False
        elif rule in _GENERATING:
            method = getattr(rules, _GENERATING[rule])
            if rule == "sup":
                left = registry[inf.premises[0]].clause
                right = registry[inf.premises[1]].clause
                drafts = method(left, right)
            else:
                drafts = method(registry[inf.premises[0]].clause)
            if not any(
                dr.rule == rule and _ckey(dr.lits) == want for dr in drafts
            ):
                return False
        else:
            return False
    return True

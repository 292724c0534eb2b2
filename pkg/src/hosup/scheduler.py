"""Strategy schedules from run logs.

A run log holds independent prover runs, one line per run.  From those
the module estimates per-(strategy, problem) runtime distributions and
builds schedules by greedy weighted set cover, either deterministically
from solve times or in expectation from the distributions.  Repeated
slices of one strategy model fresh randomized runs, so a schedule is an
ordered list of (strategy, slice) entries in pick order.
"""

import csv
from bisect import bisect_right
from dataclasses import dataclass, field

CUTOFFS = (1.0, 10.0, 30.0, 60.0, 120.0, 960.0)

STATUSES = ("success", "gaveup", "timeout")


class RunlogError(ValueError):
    pass


@dataclass(frozen=True)
class RunRecord:
    strategy: str
    problem: str
    seed: int
    status: str  # success | gaveup | timeout
    time: float  # solve time, give-up time, or the timeout limit


@dataclass(frozen=True)
class RuntimeDistribution:
    """Nondecreasing step function t -> success probability, stored as
    breakpoints.  The value at a breakpoint holds from that time on; in
    particular a timeout's limit is a breakpoint whose value already
    excludes the timed-out run from the denominator (it is only known
    to be unsolved strictly up to its limit)."""

    times: tuple
    probs: tuple

    def at(self, t: float) -> float:
        i = bisect_right(self.times, t)
        return self.probs[i - 1] if i else 0.0

    @property
    def breakpoints(self):
        return tuple(zip(self.times, self.probs))


def estimate_distribution(runs) -> RuntimeDistribution:
    """p(t) = successes within t / (runs - timeouts that ended before t).
    Gave-up runs count as failures forever; timed-out runs stop counting
    once t passes their limit, since they might have gone on to succeed.
    An empty denominator yields 0."""
    runs = list(runs)
    if not runs:
        raise ValueError("cannot estimate a distribution from no runs")
    if len({(r.strategy, r.problem) for r in runs}) != 1:
        raise ValueError("runs must share strategy and problem")
    n = len(runs)
    events = sorted({r.time for r in runs if r.status in ("success", "timeout")})
    times, probs = [], []
    for t in events:
        succ = sum(1 for r in runs if r.status == "success" and r.time <= t)
        tout = sum(1 for r in runs if r.status == "timeout" and r.time <= t)
        den = n - tout
        times.append(t)
        probs.append(succ / den if den else 0.0)
    return RuntimeDistribution(tuple(times), tuple(probs))


@dataclass
class Schedule:
    entries: list = field(default_factory=list)  # (strategy, slice seconds)

    @property
    def total(self) -> float:
        return sum(t for _, t in self.entries)

    def __iter__(self):
        return iter(self.entries)


# ---------------------------------------------------------------------------
# greedy set cover

def greedy_schedule(evals: dict, T: float) -> Schedule:
    """evals maps (strategy, problem) to a solve time or None.  Extend
    the schedule with whichever (strategy, slice) buys the most new
    problems per second; growing an already-scheduled strategy pays only
    the time beyond its current slice."""
    by_s = {}
    for (s, p), t in evals.items():
        if t is not None:
            by_s.setdefault(s, {})[p] = t
    covered = set()
    run = {s: 0.0 for s in by_s}
    sched = Schedule()
    remaining = T
    while remaining > 0:
        best = None
        for s in sorted(by_s):
            pm = by_s[s]
            for t in sorted({v for v in pm.values() if v > run[s]}):
                new = sum(1 for p, v in pm.items() if v <= t and p not in covered)
                if not new:
                    continue
                cost = t - run[s]
                # score desc, coverage desc, slice end asc, id asc
                key = (-new / cost, -new, t, s)
                if best is None or key < best[0]:
                    best = (key, s, t, cost)
        # the choice never depends on the budget; running out only cuts
        # the sequence short, so a larger T extends, never reshuffles
        if best is None or best[3] > remaining:
            break
        _, s, t, cost = best
        sched.entries.append((s, cost))
        covered |= {p for p, v in by_s[s].items() if v <= t}
        run[s] = t
        remaining -= cost
    return sched


def greedy_schedule_expected(dists: dict, T: float) -> Schedule:
    """Fractional variant: an entry (S, t) is an independent fresh run
    of S, worth gain(S, t) = sum over P of (1 - c_P) * p_{S,P}(t); after
    picking it each c_P grows by its term."""
    by_s = {}
    for (s, p), d in dists.items():
        by_s.setdefault(s, {})[p] = d
    cov = {}
    sched = Schedule()
    remaining = T
    while remaining > 0:
        best = None
        for s in sorted(by_s):
            pm = by_s[s]
            cands = sorted({t for d in pm.values() for t in d.times})
            for t in cands:
                gain = sum((1.0 - cov.get(p, 0.0)) * d.at(t) for p, d in pm.items())
                if gain <= 0:
                    continue
                key = (-gain / t, -gain, t, s)
                if best is None or key < best[0]:
                    best = (key, s, t)
        if best is None or best[2] > remaining:
            break
        _, s, t = best
        sched.entries.append((s, t))
        for p, d in by_s[s].items():
            c = cov.get(p, 0.0)
            cov[p] = c + (1.0 - c) * d.at(t)
        remaining -= t
    return sched


# ---------------------------------------------------------------------------
# replay

@dataclass
class SimReport:
    covered: set
    expected: float  # mean problems solved within the whole schedule
    at: dict  # cutoff -> mean problems solved by that moment


def simulate_schedule(sched: Schedule, truth: dict, cutoffs=CUTOFFS) -> SimReport:
    """Replay against held-out runs.  truth maps (strategy, problem,
    seed) to a RunRecord; a repeated strategy resumes where its last
    slice stopped, mirroring how the greedy builder prices extensions.
    A problem counts at a cutoff when it was solved by that moment;
    with several seeds the counts are averaged."""
    have = {s for s, _, _ in truth}
    for s, _ in sched:
        if s not in have:
            raise ValueError("strategy %r does not appear in the truth runs" % s)
    seeds = sorted({seed for _, _, seed in truth})
    problems = sorted({p for _, p, _ in truth})
    counts = {c: [] for c in cutoffs}
    totals = []
    union = set()
    for seed in seeds:
        solved = {}
        elapsed = 0.0
        alloc = {}
        for s, slc in sched:
            before = alloc.get(s, 0.0)
            alloc[s] = before + slc
            for p in problems:
                r = truth.get((s, p, seed))
                if (r is not None and r.status == "success"
                        and before < r.time <= alloc[s]):
                    at = elapsed + r.time - before
                    if p not in solved or at < solved[p]:
                        solved[p] = at
            elapsed += slc
        union |= set(solved)
        totals.append(len(solved))
        for c in cutoffs:
            counts[c].append(sum(1 for at in solved.values() if at <= c))
    mean = lambda xs: sum(xs) / len(xs) if xs else 0.0
    return SimReport(union, mean(totals), {c: mean(counts[c]) for c in cutoffs})


# ---------------------------------------------------------------------------
# run logs

def ingest_runlog(path) -> list:
    """CSV lines strategy,problem,seed,status,time; header optional."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if i == 1 and row[0].strip() == "strategy":
                continue
            if len(row) != 5:
                raise RunlogError("%s:%d: expected 5 fields, got %d" % (path, i, len(row)))
            s, p, seed, status, t = (f.strip() for f in row)
            if status not in STATUSES:
                raise RunlogError("%s:%d: unknown status %r" % (path, i, status))
            try:
                seed = int(seed)
                t = float(t)
            except ValueError:
                raise RunlogError("%s:%d: bad seed or time" % (path, i)) from None
            if t <= 0:
                raise RunlogError("%s:%d: nonpositive time" % (path, i))
            out.append(RunRecord(s, p, seed, status, t))
    return out


def group_runs(runs) -> dict:
    cells = {}
    for r in runs:
        cells.setdefault((r.strategy, r.problem), []).append(r)
    return cells


def estimate_all(runs) -> dict:
    return {cell: estimate_distribution(rs) for cell, rs in group_runs(runs).items()}


def evals_from_runs(runs) -> dict:
    """Deterministic view of a log: best observed solve time per cell."""
    out = {}
    for r in runs:
        cell = (r.strategy, r.problem)
        if r.status == "success":
            t = out.get(cell)
            out[cell] = r.time if t is None else min(t, r.time)
        else:
            out.setdefault(cell, None)
    return out


# ---------------------------------------------------------------------------
# iterative re-estimation

def relied_cells(sched: Schedule, dists: dict) -> set:
    """Cells the schedule actually leans on: a positive success
    probability within some scheduled slice of that strategy."""
    out = set()
    for s, t in sched:
        for (s2, p), d in dists.items():
            if s2 == s and d.at(t) > 0:
                out.add((s2, p))
    return out


def iterative_reestimate(runs, build, rounds: int, sampler) -> Schedule:
    """Alternate schedule building with fresh runs for the cells the
    schedule relies on.  build maps distributions to a Schedule; sampler
    maps (strategy, problem) to additional RunRecords."""
    runs = list(runs)
    dists = estimate_all(runs)
    sched = build(dists)
    for _ in range(rounds):
        for cell in sorted(relied_cells(sched, dists)):
            runs.extend(sampler(*cell))
        dists = estimate_all(runs)
        sched = build(dists)
    return sched


# ---------------------------------------------------------------------------
# text output

def format_schedule(sched: Schedule, report: SimReport = None) -> str:
    lines = ["%s %g" % (s, t) for s, t in sched]
    lines.append("%% total %g seconds in %d slices" % (sched.total, len(sched.entries)))
    if report is not None:
        lines.append("%% covered %d problems, %.2f expected"
                     % (len(report.covered), report.expected))
        for c in sorted(report.at):
            lines.append("%% cutoff %g: %.2f" % (c, report.at[c]))
    return "\n".join(lines) + "\n"

"""Bulk integer engine behind box verification.

Everything here works in exact integer arithmetic: k-type coordinates are
integers, pairings against coroots are integers, and every rational
constant (weight Gram matrix, rho_c pairings) is cleared to a common
denominator once per case. Squared spin norms come out as int64 values
scaled by that single denominator, so comparisons and minima are exact.

The box scan is a depth-first walk over coordinate prefixes with three
prunes, none of which can change the reported outcome:
  * a subtree entirely unitarily small contributes no checked points;
  * a subtree entirely unitarily large with no dominant mu - beta
    contributes no checked points;
  * once some margin m has been computed, a subtree whose cheap lower
    bound already exceeds max(0, m) is counted but not evaluated (the
    bound is a valid lower bound for every margin inside, so no
    violation and no new minimum can hide there).
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from fractions import Fraction as Q
from hashlib import sha1
from math import lcm, prod

import numpy as np

from .cases import CaseData, ambient_to_ktype
from .errors import ConstructionError
from .rootdata import coroot_pairing, inner, norm_sq
from .usmall import usmall_system

_BLOCK_TAIL = 4  # innermost coordinates enumerated as one numpy block
_FLUSH_SEEDED = 50_000
_FLUSH_UNSEEDED = 4_096


@dataclass(frozen=True)
class ScanTables:
    """Per-case integer data for bulk squared-spin-norm evaluation."""

    scale: int
    pairing: np.ndarray  # (lk, l): coroot pairings of the coordinate basis
    cartan: np.ndarray  # (lk, lk): cartan[i][j] = <delta_i, delta_j coroot>
    shift: np.ndarray  # (s, lk): coroot pairings of each rho_n variant
    gram_s: np.ndarray  # (l, l): scale * <basis_k, basis_l>
    variant_s: np.ndarray  # (s, l): scale * <basis_k, rho_n variant>
    variant_nrm_s: np.ndarray  # (s,): scale * ||rho_n variant||^2
    rho_c_pair2_s: np.ndarray  # (lk,): 2 * scale * <k-fund weight, rho_c>
    rho_c_nrm_s: int  # scale * ||rho_c||^2
    rho_c_lin_s: np.ndarray  # (l,): scale * <basis_k, rho_c>
    rho_c_var_s: np.ndarray  # (s,): scale * <rho_n variant, rho_c>
    beta_coords: np.ndarray  # (l,) k-type coordinates of beta
    cheap_coef_s: np.ndarray  # (l,): 2 * scale * <basis_k, beta>, nonneg
    cheap_const_s: int  # scale * (2<rho_c,beta> + 2 max_j<rho_n_j,beta> + |beta|^2)


def _as_int_array(values, what: str) -> np.ndarray:
    out = []
    for row in values:
        if isinstance(row, (list, tuple)):
            out.append([_as_int(v, what) for v in row])
        else:
            out.append(_as_int(row, what))
    return np.array(out, dtype=np.int64)


def _as_int(v, what: str) -> int:
    q = Q(v)
    if q.denominator != 1:
        raise ConstructionError(f"{what} is not integral: {q}")
    return int(q)


def build_tables(case: CaseData) -> ScanTables:
    k = case.k_system
    if case.k_has_center:
        dim = len(case.beta)
        basis = [
            tuple(Q(1) if j == i else Q(0) for j in range(dim)) for i in range(dim)
        ]
    else:
        basis = list(case.k_fund_weights)
    deltas = k.simple_roots
    kfw = k.fundamental_weights

    pairing = [[coroot_pairing(b, d) for b in basis] for d in deltas]
    cartan = [[coroot_pairing(di, dj) for dj in deltas] for di in deltas]
    shift = [[coroot_pairing(v, d) for d in deltas] for v in case.rho_n_variants]

    gram = [[inner(a, b) for b in basis] for a in basis]
    variant = [[inner(b, v) for b in basis] for v in case.rho_n_variants]
    variant_nrm = [norm_sq(v) for v in case.rho_n_variants]
    rho_c_pair = [inner(w, case.rho_c) for w in kfw]
    rho_c_nrm = norm_sq(case.rho_c)
    rho_c_lin = [inner(b, case.rho_c) for b in basis]
    rho_c_var = [inner(v, case.rho_c) for v in case.rho_n_variants]
    beta_c = case.beta if case.k_has_center else ambient_to_ktype(case, case.beta)
    cheap_coef = [2 * inner(b, case.beta) for b in basis]
    cheap_const = (
        2 * inner(case.rho_c, case.beta)
        + 2 * max(inner(v, case.beta) for v in case.rho_n_variants)
        + norm_sq(case.beta)
    )

    rationals = (
        [x for row in gram for x in row]
        + [x for row in variant for x in row]
        + variant_nrm
        + rho_c_pair
        + [rho_c_nrm]
        + rho_c_lin
        + rho_c_var
        + cheap_coef
        + [cheap_const]
    )
    scale = lcm(*(Q(x).denominator for x in rationals))

    def scaled(vals):
        if isinstance(vals[0], (list, tuple)):
            return np.array(
                [[_as_int(x * scale, "scaled table") for x in row] for row in vals],
                dtype=np.int64,
            )
        return np.array([_as_int(x * scale, "scaled table") for x in vals],
                        dtype=np.int64)

    return ScanTables(
        scale=scale,
        pairing=_as_int_array(pairing, "coordinate pairing"),
        cartan=_as_int_array(cartan, "cartan pairing"),
        shift=_as_int_array(shift, "variant pairing"),
        gram_s=scaled(gram),
        variant_s=scaled(variant),
        variant_nrm_s=scaled(variant_nrm),
        rho_c_pair2_s=2 * scaled(rho_c_pair),
        rho_c_nrm_s=_as_int(rho_c_nrm * scale, "rho_c norm"),
        rho_c_lin_s=scaled(rho_c_lin),
        rho_c_var_s=scaled(rho_c_var),
        beta_coords=_as_int_array(list(beta_c), "beta coordinates"),
        cheap_coef_s=scaled(cheap_coef),
        cheap_const_s=_as_int(cheap_const * scale, "cheap constant"),
    )


def conjugate_dominant_bulk(c: np.ndarray, cartan: np.ndarray) -> np.ndarray:
    """Sweep pairing-coordinate rows into the dominant chamber in place.

    Applies the simple reflection at the lowest-index negative pairing,
    exactly like the single-vector conjugation, so the two agree on which
    dominant representative (and implicitly which Weyl word) is reached.
    Keeps an active row set so finished rows cost nothing.
    """
    active = np.nonzero((c < 0).any(axis=1))[0]
    while active.size:
        neg = c[active] < 0
        busy = neg.any(axis=1)
        active = active[busy]
        if not active.size:
            break
        idx = neg[busy].argmax(axis=1)
        vals = c[active, idx]
        c[active] -= vals[:, None] * cartan[idx]
    return c


def bulk_spin_sq_scaled(tables: ScanTables, coords: np.ndarray) -> np.ndarray:
    """Squared spin norms (times tables.scale) for rows of coords.

    A variant j can only lower the running minimum when its sweep-free
    lower bound |x|^2 + 2 max(0, <x, rho_c>) + |rho_c|^2 beats it (the
    dominant conjugate maximizes the rho_c pairing over the orbit, and
    that pairing is nonnegative), so most variants never get swept.
    """
    m = coords
    quad = np.einsum("nk,kl,nl->n", m, tables.gram_s, m)
    base_pair = m @ tables.pairing.T
    lin = m @ tables.variant_s.T  # (n, s)
    mu_rc = m @ tables.rho_c_lin_s  # (n,)
    best = None
    for j in range(len(tables.shift)):
        xx = quad - 2 * lin[:, j] + tables.variant_nrm_s[j]
        x_rc = mu_rc - tables.rho_c_var_s[j]
        floor = (
            xx + 2 * np.maximum(0, x_rc) + tables.rho_c_nrm_s
        )
        if best is None:
            rows = slice(None)
        else:
            mask = floor < best
            if not mask.any():
                continue
            rows = np.nonzero(mask)[0]
        c = base_pair[rows] - tables.shift[j]
        conjugate_dominant_bulk(c, tables.cartan)
        total = xx[rows] + c @ tables.rho_c_pair2_s + tables.rho_c_nrm_s
        if best is None:
            best = total
        else:
            best[rows] = np.minimum(best[rows], total)
    return best


def bulk_margins_scaled(tables: ScanTables, coords: np.ndarray) -> np.ndarray:
    """Scaled step margins spin(mu)^2 - spin(mu - beta)^2 for rows of coords."""
    return bulk_spin_sq_scaled(tables, coords) - bulk_spin_sq_scaled(
        tables, coords - tables.beta_coords
    )


# ---------------------------------------------------------------------------
# box scanning
# ---------------------------------------------------------------------------


@dataclass
class _SliceResult:
    scanned: int = 0
    filtered: int = 0
    min_scaled: int | None = None
    violations: list | None = None

    def __post_init__(self):
        if self.violations is None:
            self.violations = []


class _Scanner:
    def __init__(self, case: CaseData, ranges, shortcut: bool):
        self.case = case
        self.tables = build_tables(case)
        self.shortcut = shortcut
        system = usmall_system(case)
        self.row_coeffs = np.array(
            [list(c) for c, _ in system.rows], dtype=np.int64
        )
        self.row_bounds = np.array([b for _, b in system.rows], dtype=np.int64)
        self.dim = len(ranges)
        self.lo = np.array([r[0] for r in ranges], dtype=np.int64)
        self.hi = np.array([r[1] for r in ranges], dtype=np.int64)
        order = sorted(
            range(self.dim), key=lambda k: (-(self.hi[k] - self.lo[k]), k)
        )
        self.perm = order
        self.lo_p = self.lo[order]
        self.hi_p = self.hi[order]
        self.coeff_p = self.row_coeffs[:, order]
        self.semisimple = not case.k_has_center
        self.beta_p = self.tables.beta_coords[order]
        self.cheap_p = self.tables.cheap_coef_s[order]

        # suffix tables, sign-aware so SP4R's negative coefficients work too
        nrows = len(self.row_bounds)
        self.min_rest = np.zeros((self.dim + 1, nrows), dtype=np.int64)
        self.max_rest = np.zeros((self.dim + 1, nrows), dtype=np.int64)
        self.cheap_rest = np.zeros(self.dim + 1, dtype=np.int64)
        for d in range(self.dim - 1, -1, -1):
            col = self.coeff_p[:, d]
            self.min_rest[d] = self.min_rest[d + 1] + np.where(
                col > 0, col * self.lo_p[d], col * self.hi_p[d]
            )
            self.max_rest[d] = self.max_rest[d + 1] + np.where(
                col > 0, col * self.hi_p[d], col * self.lo_p[d]
            )
            self.cheap_rest[d] = self.cheap_rest[d + 1] + self.cheap_p[d] * self.lo_p[d]
        self.block_depth = max(1, self.dim - _BLOCK_TAIL)

        # Every block shares one tail grid over the innermost coordinates,
        # so its inequality, dominance, and cheap-bound contributions are
        # computed once; per block only the fixed prefix's scalars shift.
        d0 = self.block_depth
        tail_axes = [
            np.arange(self.lo_p[k], self.hi_p[k] + 1, dtype=np.int64)
            for k in range(d0, self.dim)
        ]
        self.tail_orig = [self.perm[k] for k in range(d0, self.dim)]
        if tail_axes:
            grids = np.meshgrid(*tail_axes, indexing="ij")
            self.tail_coords = np.stack([g.reshape(-1) for g in grids], axis=1)
        else:
            self.tail_coords = np.zeros((1, 0), dtype=np.int64)
        self.tail_count = len(self.tail_coords)
        tail_coeffs = self.row_coeffs[:, self.tail_orig]
        self.tail_lhs = self.tail_coords @ tail_coeffs.T
        self.tail_cheap = (
            self.tail_coords @ self.tables.cheap_coef_s[self.tail_orig]
        )
        if self.semisimple:
            tail_beta = self.tables.beta_coords[self.tail_orig]
            self.tail_dom = (self.tail_coords >= tail_beta).all(axis=1)
        else:
            self.tail_dom = None

    def subtree_size(self, depth: int) -> int:
        return prod(int(self.hi_p[k] - self.lo_p[k] + 1) for k in range(depth, self.dim))

    def dominant_tail_count(self, depth: int) -> int:
        total = 1
        for k in range(depth, self.dim):
            lo = max(int(self.lo_p[k]), int(self.beta_p[k]))
            total *= max(0, int(self.hi_p[k]) - lo + 1)
        return total

    def scan_slice(self, first_value: int) -> _SliceResult:
        state = _SliceResult()
        self._buffer = []
        self._buffered = 0
        prefix = np.zeros(self.dim, dtype=np.int64)
        prefix[0] = first_value
        partial = self.coeff_p[:, 0] * first_value
        cheap_partial = int(self.cheap_p[0]) * first_value
        prefix_dom = first_value >= int(self.beta_p[0])
        if self.dim == 1 or 1 >= self.block_depth:
            self._block(prefix, partial, cheap_partial, prefix_dom, state)
        else:
            self._walk(1, prefix, partial, cheap_partial, prefix_dom, state)
        self._flush(state)
        return state

    def _walk(self, depth, prefix, partial, cheap_partial, prefix_dom, state):
        if np.all(partial + self.max_rest[depth] <= self.row_bounds):
            state.scanned += self.subtree_size(depth)
            return
        if self.semisimple and np.any(partial + self.min_rest[depth] > self.row_bounds):
            dom = self.dominant_tail_count(depth) if prefix_dom else 0
            if dom == 0:
                state.scanned += self.subtree_size(depth)
                return
            if (
                self.shortcut
                and state.min_scaled is not None
                and cheap_partial + int(self.cheap_rest[depth]) - self.tables.cheap_const_s
                > max(0, state.min_scaled)
            ):
                state.scanned += self.subtree_size(depth)
                state.filtered += dom
                return
        if depth >= self.block_depth:
            self._block(prefix, partial, cheap_partial, prefix_dom, state)
            return
        col = self.coeff_p[:, depth]
        cheap_c = int(self.cheap_p[depth])
        beta_d = int(self.beta_p[depth])
        for v in range(int(self.lo_p[depth]), int(self.hi_p[depth]) + 1):
            prefix[depth] = v
            self._walk(
                depth + 1,
                prefix,
                partial + col * v,
                cheap_partial + cheap_c * v,
                prefix_dom and v >= beta_d,
                state,
            )

    def _build_coords(self, prefix, rows):
        coords = np.empty((len(rows), self.dim), dtype=np.int64)
        for k in range(self.block_depth):
            coords[:, self.perm[k]] = prefix[k]
        for i, orig in enumerate(self.tail_orig):
            coords[:, orig] = self.tail_coords[rows, i]
        return coords

    def _block(self, prefix, partial, cheap_partial, prefix_dom, state):
        state.scanned += self.tail_count
        small = (self.tail_lhs + partial <= self.row_bounds).all(axis=1)
        if self.semisimple:
            if not prefix_dom:
                return
            eligible = ~small & self.tail_dom
        else:
            coords = self._build_coords(prefix, np.arange(self.tail_count))
            stepped = coords - self.tables.beta_coords
            dominant = (stepped @ self.tables.pairing.T >= 0).all(axis=1)
            dominant &= (coords @ self.tables.pairing.T >= 0).all(axis=1)
            eligible = ~small & dominant
        count = int(eligible.sum())
        if count == 0:
            return
        state.filtered += count
        picked = eligible
        if self.shortcut and state.min_scaled is not None:
            cheap = self.tail_cheap + (cheap_partial - self.tables.cheap_const_s)
            picked = eligible & (cheap <= max(0, state.min_scaled))
        rows = np.nonzero(picked)[0]
        if rows.size:
            self._buffer.append(self._build_coords(prefix, rows))
            self._buffered += rows.size
        limit = _FLUSH_SEEDED if state.min_scaled is not None else _FLUSH_UNSEEDED
        if self._buffered >= limit:
            self._flush(state)

    def _flush(self, state):
        if not self._buffered:
            return
        coords = np.concatenate(self._buffer, axis=0)
        self._buffer = []
        self._buffered = 0
        margins = bulk_margins_scaled(self.tables, coords)
        low = int(margins.min())
        if state.min_scaled is None or low < state.min_scaled:
            state.min_scaled = low
        bad = np.nonzero(margins <= 0)[0]
        for i in bad:
            state.violations.append(
                (tuple(int(x) for x in coords[i]), int(margins[i]))
            )


def _merge(results, scale) -> dict:
    scanned = sum(r.scanned for r in results)
    filtered = sum(r.filtered for r in results)
    mins = [r.min_scaled for r in results if r.min_scaled is not None]
    violations = sorted(
        (coords, Q(m, scale)) for r in results for coords, m in r.violations
    )
    return {
        "scanned": scanned,
        "filtered": filtered,
        "violations": violations,
        "min_margin_sq": Q(min(mins), scale) if mins else None,
    }


def _slice_for_pool(args):
    case, ranges, shortcut, value = args
    scanner = _Scanner(case, ranges, shortcut)
    return value, scanner.scan_slice(value)


def _checkpoint_path(directory, case, ranges, shortcut):
    key = json.dumps(
        {"case": case.id.label, "ranges": [list(r) for r in ranges],
         "shortcut": bool(shortcut)},
        sort_keys=True,
    )
    digest = sha1(key.encode()).hexdigest()[:16]
    return os.path.join(directory, f"scan-{case.id.family}-{digest}.json")


def _load_checkpoint(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError):
        return {}
    out = {}
    for key, rec in data.get("slices", {}).items():
        res = _SliceResult(
            scanned=rec["scanned"],
            filtered=rec["filtered"],
            min_scaled=rec["min_scaled"],
            violations=[(tuple(c), m) for c, m in rec["violations"]],
        )
        out[int(key)] = res
    return out


def _save_checkpoint(path, done):
    payload = {
        "slices": {
            str(v): {
                "scanned": r.scanned,
                "filtered": r.filtered,
                "min_scaled": r.min_scaled,
                "violations": [[list(c), m] for c, m in r.violations],
            }
            for v, r in sorted(done.items())
        }
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def scan_box(case: CaseData, ranges, *, jobs: int = 1, shortcut: bool = True,
             checkpoint_dir: str | None = None, log=None) -> dict:
    """Scan every lattice point of the box; see pencil.verify_box."""
    ranges = tuple((int(lo), int(hi)) for lo, hi in ranges)
    probe = _Scanner(case, ranges, shortcut)
    scale = probe.tables.scale
    first_lo, first_hi = int(probe.lo_p[0]), int(probe.hi_p[0])
    slice_values = list(range(first_lo, first_hi + 1))

    if checkpoint_dir is None:
        checkpoint_dir = os.environ.get("LIECHECK_CHECKPOINT_DIR") or None
    ckpath = None
    done = {}
    if checkpoint_dir:
        os.makedirs(checkpoint_dir, exist_ok=True)
        ckpath = _checkpoint_path(checkpoint_dir, case, ranges, shortcut)
        done = _load_checkpoint(ckpath)
        done = {v: r for v, r in done.items() if v in set(slice_values)}
    todo = [v for v in slice_values if v not in done]

    t0 = time.monotonic()
    completed = 0

    def note(value):
        nonlocal completed
        completed += 1
        if log:
            log(
                f"slice {value} done ({completed}/{len(todo)}), "
                f"{time.monotonic() - t0:.1f}s elapsed"
            )

    if jobs > 1 and len(todo) > 1:
        import multiprocessing as mp

        with mp.Pool(jobs) as pool:
            for value, result in pool.imap_unordered(
                _slice_for_pool, [(case, ranges, shortcut, v) for v in todo]
            ):
                done[value] = result
                if ckpath:
                    _save_checkpoint(ckpath, done)
                note(value)
    else:
        for value in todo:
            done[value] = probe.scan_slice(value)
            if ckpath:
                _save_checkpoint(ckpath, done)
            note(value)

    merged = _merge([done[v] for v in sorted(done)], scale)
    merged["elapsed_ms"] = int((time.monotonic() - t0) * 1000)
    return merged

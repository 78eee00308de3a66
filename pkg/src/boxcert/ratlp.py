"""Exact rational linear programming with verifiable certificates.

Two-phase primal simplex with Bland's smallest-index rule.  All pivots
are exact: tableau rows are integer vectors with a positive per-row
denominator, so no rounding can occur anywhere.  Every outcome carries a
certificate that ``check_witness`` re-verifies by substitution alone:

* Optimal: a primal witness plus dual multipliers proving optimality
  through stationarity and equal objectives (weak duality).
* Infeasible: a Farkas vector whose exact combination of constraint and
  bound rows is contradictory (zero combined coefficients, negative
  combined right-hand side in the normalized <=/= view).

Certificate row keys: ``("con", i)`` for constraint i, ``("lb", v)`` /
``("ub", v)`` for variable bounds.  In the normalized view every
constraint is written with relation ``<=`` or ``=`` (``>=`` rows are
negated), the objective is a maximization, and bounds appear as rows
``-v <= -lb`` and ``v <= ub``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from .rational import as_fraction, format_rational_short

RELATIONS = ("<=", ">=", "=")

_GCD_BITS = 64  # reduce a row by its gcd once the denominator outgrows this
_MAX_PIVOTS = 2_000_000


class MalformedLP(Exception):
    pass


def _terms(coeffs) -> tuple[tuple[str, Fraction], ...]:
    if isinstance(coeffs, dict):
        items = coeffs.items()
    else:
        items = list(coeffs)
    out = []
    for var, value in items:
        value = as_fraction(value)
        if value != 0:
            out.append((str(var), value))
    out.sort(key=lambda kv: kv[0])
    names = [v for v, _ in out]
    if len(set(names)) != len(names):
        raise MalformedLP(f"duplicate variable in linear form: {names}")
    return tuple(out)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[str, Fraction], ...]
    relation: str
    rhs: Fraction
    name: str = ""

    def __init__(self, coeffs, relation, rhs, name=""):
        if relation not in RELATIONS:
            raise MalformedLP(f"unknown relation {relation!r}")
        object.__setattr__(self, "coeffs", _terms(coeffs))
        object.__setattr__(self, "relation", relation)
        object.__setattr__(self, "rhs", as_fraction(rhs))
        object.__setattr__(self, "name", name)

    def coeff_map(self) -> dict[str, Fraction]:
        return dict(self.coeffs)


@dataclass(frozen=True)
class LinearProgram:
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    objective: tuple[tuple[str, Fraction], ...] | None
    sense: str
    lower: tuple[tuple[str, Fraction], ...]
    upper: tuple[tuple[str, Fraction], ...]

    def __init__(
        self,
        variables,
        constraints,
        objective=None,
        sense="max",
        lower=None,
        upper=None,
    ):
        variables = tuple(str(v) for v in variables)
        if not variables:
            raise MalformedLP("no variables")
        if len(set(variables)) != len(variables):
            raise MalformedLP("duplicate variable names")
        known = set(variables)
        constraints = tuple(constraints)
        for con in constraints:
            if not isinstance(con, Constraint):
                raise MalformedLP(f"not a Constraint: {con!r}")
            for var, _ in con.coeffs:
                if var not in known:
                    raise MalformedLP(f"constraint uses unknown variable {var!r}")
        if sense not in ("max", "min"):
            raise MalformedLP(f"sense must be 'max' or 'min', got {sense!r}")
        obj = None if objective is None else _terms(objective)
        if obj is not None:
            for var, _ in obj:
                if var not in known:
                    raise MalformedLP(f"objective uses unknown variable {var!r}")

        def bound_terms(bounds):
            if bounds is None:
                return ()
            items = bounds.items() if isinstance(bounds, dict) else list(bounds)
            out = []
            for var, value in items:
                var = str(var)
                if var not in known:
                    raise MalformedLP(f"bound on unknown variable {var!r}")
                out.append((var, as_fraction(value)))
            out.sort(key=lambda kv: kv[0])
            if len({v for v, _ in out}) != len(out):
                raise MalformedLP("duplicate bound")
            return tuple(out)

        lower = bound_terms(lower)
        upper = bound_terms(upper)
        lo_map, hi_map = dict(lower), dict(upper)
        for var in lo_map.keys() & hi_map.keys():
            if lo_map[var] > hi_map[var]:
                raise MalformedLP(f"lower bound above upper bound for {var!r}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "sense", sense)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def lower_map(self) -> dict[str, Fraction]:
        return dict(self.lower)

    def upper_map(self) -> dict[str, Fraction]:
        return dict(self.upper)

    def objective_map(self) -> dict[str, Fraction]:
        return {} if self.objective is None else dict(self.objective)


@dataclass(frozen=True)
class LPOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    witness: dict[str, Fraction] | None = None
    objective_value: Fraction | None = None
    dual: dict[tuple, Fraction] | None = None
    farkas: dict[tuple, Fraction] | None = None


# ---------------------------------------------------------------------------
# Normalized row view shared by solver and checker.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _NormRow:
    key: tuple
    coeffs: dict[str, Fraction]
    relation: str  # "<=" or "="
    rhs: Fraction


def normalized_rows(lp: LinearProgram) -> list[_NormRow]:
    """Constraints (>= negated to <=) followed by lb/ub bound rows."""
    rows = []
    for i, con in enumerate(lp.constraints):
        coeffs = con.coeff_map()
        if con.relation == ">=":
            rows.append(
                _NormRow(("con", i), {v: -c for v, c in coeffs.items()}, "<=", -con.rhs)
            )
        elif con.relation == "<=":
            rows.append(_NormRow(("con", i), coeffs, "<=", con.rhs))
        else:
            rows.append(_NormRow(("con", i), coeffs, "=", con.rhs))
    for var, lo in lp.lower:
        rows.append(_NormRow(("lb", var), {var: Fraction(-1)}, "<=", -lo))
    for var, hi in lp.upper:
        rows.append(_NormRow(("ub", var), {var: Fraction(1)}, "<=", hi))
    return rows


def normalized_objective(lp: LinearProgram) -> dict[str, Fraction]:
    """Objective as a maximization (empty when feasibility-only)."""
    obj = lp.objective_map()
    if lp.sense == "min":
        obj = {v: -c for v, c in obj.items()}
    return obj


# ---------------------------------------------------------------------------
# Canonicalization: bounded variables -> nonnegative columns.
# ---------------------------------------------------------------------------


@dataclass
class _Column:
    var: str
    kind: str  # "shift" (x = lo + u), "flip" (x = hi - u), "pos", "neg"
    offset: Fraction  # lo for shift, hi for flip, 0 otherwise


@dataclass
class _Canonical:
    columns: list[_Column]
    col_of_var: dict[str, list[int]]
    rows: list[dict[int, Fraction]]  # sparse coeffs over columns
    rhs: list[Fraction]
    sigma: list[int]  # +1 / -1 row orientation vs. its normalized source
    relations: list[str]  # "<=" or "=" (pre-negation)
    keys: list[tuple]  # normalized-row key per canonical row
    cost: list[Fraction]  # canonical (minimization) objective per column


def _canonicalize(lp: LinearProgram) -> _Canonical:
    lo_map, hi_map = lp.lower_map(), lp.upper_map()
    columns: list[_Column] = []
    col_of_var: dict[str, list[int]] = {}
    for var in lp.variables:
        lo, hi = lo_map.get(var), hi_map.get(var)
        if lo is not None:
            columns.append(_Column(var, "shift", lo))
            col_of_var[var] = [len(columns) - 1]
        elif hi is not None:
            columns.append(_Column(var, "flip", hi))
            col_of_var[var] = [len(columns) - 1]
        else:
            columns.append(_Column(var, "pos", Fraction(0)))
            columns.append(_Column(var, "neg", Fraction(0)))
            col_of_var[var] = [len(columns) - 2, len(columns) - 1]

    def substitute(coeffs: dict[str, Fraction]):
        row: dict[int, Fraction] = {}
        shift = Fraction(0)  # constant absorbed into the rhs
        for var, c in coeffs.items():
            cols = col_of_var[var]
            kind = columns[cols[0]].kind
            if kind == "shift":
                row[cols[0]] = row.get(cols[0], Fraction(0)) + c
                shift += c * columns[cols[0]].offset
            elif kind == "flip":
                row[cols[0]] = row.get(cols[0], Fraction(0)) - c
                shift += c * columns[cols[0]].offset
            else:
                row[cols[0]] = row.get(cols[0], Fraction(0)) + c
                row[cols[1]] = row.get(cols[1], Fraction(0)) - c
        return {j: v for j, v in row.items() if v != 0}, shift

    rows, rhs, sigma, relations, keys = [], [], [], [], []
    seen: dict[tuple, int] = {}
    for norm in normalized_rows(lp):
        if norm.key[0] == "lb":
            continue  # absorbed by the shift substitution
        if norm.key[0] == "ub" and columns[col_of_var[norm.key[1]][0]].kind == "flip":
            continue  # absorbed by the flip substitution
        coeffs, shift = substitute(norm.coeffs)
        adjusted = norm.rhs - shift
        dedup_key = (tuple(sorted(coeffs.items())), norm.relation, adjusted)
        if dedup_key in seen:
            continue
        seen[dedup_key] = len(rows)
        rows.append(coeffs)
        rhs.append(adjusted)
        sigma.append(1)
        relations.append(norm.relation)
        keys.append(norm.key)

    cost = [Fraction(0)] * len(columns)
    for var, c in normalized_objective(lp).items():
        # canonical problem minimizes; max obj contributes -c per column unit
        for j in col_of_var[var]:
            kind = columns[j].kind
            if kind in ("shift", "pos"):
                cost[j] -= c
            elif kind == "flip":
                cost[j] += c
            else:  # neg split piece
                cost[j] += c
    return _Canonical(columns, col_of_var, rows, rhs, sigma, relations, keys, cost)


# ---------------------------------------------------------------------------
# Integer tableau simplex.
# ---------------------------------------------------------------------------


def _scale_row(fracs: list[Fraction]) -> tuple[list[int], int]:
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    return [int(f * den) for f in fracs], den


def _reduce_row(row: list[int], den: int) -> tuple[list[int], int]:
    if den.bit_length() <= _GCD_BITS:
        return row, den
    g = reduce(gcd, row, den)
    if g > 1:
        return [v // g for v in row], den // g
    return row, den


class _Simplex:
    """Mutable tableau; one instance per solve call."""

    def __init__(self, canon: _Canonical):
        self.canon = canon
        n_struct = len(canon.columns)
        m = len(canon.rows)
        self.n_struct = n_struct
        self.m = m
        # column layout: structural | slack (per <= row) | artificial | rhs
        slack_of_row: dict[int, int] = {}
        next_col = n_struct
        for i, rel in enumerate(canon.relations):
            if rel == "<=":
                slack_of_row[i] = next_col
                next_col += 1
        self.slack_of_row = slack_of_row
        self.art_of_row: dict[int, int] = {}
        art_rows = []
        for i in range(m):
            needs_art = canon.relations[i] == "=" or canon.rhs[i] < 0
            if needs_art:
                art_rows.append(i)
        for i in art_rows:
            self.art_of_row[i] = next_col
            next_col += 1
        self.n_cols = next_col
        self.rows: list[list[int]] = []
        self.dens: list[int] = []
        self.basis: list[int] = []
        self.active = [True] * m
        self.sigma = list(canon.sigma)
        for i in range(m):
            fracs = [Fraction(0)] * (self.n_cols + 1)
            for j, v in canon.rows[i].items():
                fracs[j] = v
            if i in slack_of_row:
                fracs[slack_of_row[i]] = Fraction(1)
            fracs[self.n_cols] = canon.rhs[i]
            if canon.rhs[i] < 0:
                fracs = [-v for v in fracs]
                self.sigma[i] = -self.sigma[i]
            ints, den = _scale_row(fracs)
            self.rows.append(ints)
            self.dens.append(den)
            if i in self.art_of_row:
                self.rows[i][self.art_of_row[i]] = den  # coefficient 1
                self.basis.append(self.art_of_row[i])
            else:
                self.basis.append(slack_of_row[i])
        # phase-1 reduced costs: cost 1 on artificials, so z1 = -(sum of art rows)
        z1 = [Fraction(0)] * (self.n_cols + 1)
        for i in self.art_of_row:
            den = self.dens[i]
            row = self.rows[i]
            for j in range(self.n_cols + 1):
                if row[j]:
                    z1[j] -= Fraction(row[j], den)
        for i, col in self.art_of_row.items():
            z1[col] += 1
        self.z1, self.z1_den = _scale_row(z1)
        # phase-2 reduced costs start at the canonical cost vector
        z2 = [Fraction(0)] * (self.n_cols + 1)
        for j, c in enumerate(canon.cost):
            z2[j] = c
        self.z2, self.z2_den = _scale_row(z2)
        self.art_cols = set(self.art_of_row.values())
        slack_cols = set(self.slack_of_row.values())
        self._lex_order = (
            [self.n_cols]
            + sorted(self.art_cols)
            + sorted(slack_cols)
            + [j for j in range(self.n_cols) if j not in self.art_cols and j not in slack_cols]
        )
        self.pivots = 0

    # -- core pivot ---------------------------------------------------------

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        pval = prow[c]
        if pval < 0:
            prow = [-v for v in prow]
            pval = -pval
        prow, dr = _reduce_row(prow, pval)
        self.rows[r] = prow
        self.dens[r] = dr
        for i in range(self.m):
            if i == r or not self.active[i]:
                continue
            f = self.rows[i][c]
            if f == 0:
                continue
            row = self.rows[i]
            new = [a * dr - f * b for a, b in zip(row, prow)]
            new, den = _reduce_row(new, self.dens[i] * dr)
            self.rows[i] = new
            self.dens[i] = den
        for attr_row, attr_den in (("z1", "z1_den"), ("z2", "z2_den")):
            zrow = getattr(self, attr_row)
            f = zrow[c]
            if f == 0:
                continue
            new = [a * dr - f * b for a, b in zip(zrow, prow)]
            new, den = _reduce_row(new, getattr(self, attr_den) * dr)
            setattr(self, attr_row, new)
            setattr(self, attr_den, den)
        self.basis[r] = c
        self.pivots += 1
        if self.pivots > _MAX_PIVOTS:
            raise RuntimeError("simplex pivot limit exceeded")

    # -- pivot selection ------------------------------------------------------
    #
    # Deterministic anti-cycling rule: Dantzig's most-negative reduced
    # cost enters (ties to the smallest column index) and the leaving row
    # is chosen by the lexicographic ratio rule, i.e. the classical
    # infinitesimal perturbation.  The lexicographic order puts the rhs
    # first, then artificial, slack and structural columns, which makes
    # every initial row lex-positive; termination is then guaranteed for
    # any entering rule.

    def _entering(self, zrow: list[int], allow_artificial: bool) -> int | None:
        best = None
        best_val = 0
        for j in range(self.n_cols):
            if not allow_artificial and j in self.art_cols:
                continue
            v = zrow[j]
            if v < best_val:
                best, best_val = j, v
        return best

    def _lex_less(self, i: int, k: int, ai: int, ak: int) -> bool:
        """Compare rows i, k scaled by their pivot-column entries, lex order."""
        row_i, row_k = self.rows[i], self.rows[k]
        di = self.dens[i] * ai
        dk = self.dens[k] * ak
        for j in self._lex_order:
            lhs = row_i[j] * dk
            rhs = row_k[j] * di
            if lhs != rhs:
                return lhs < rhs
        return False  # identical scaled rows cannot happen for distinct bases

    def _leaving(self, c: int) -> int | None:
        rhs_col = self.n_cols
        best_row = None
        best_num = best_den = 0
        ties: list[int] = []
        for i in range(self.m):
            if not self.active[i]:
                continue
            a = self.rows[i][c]
            if a <= 0:
                continue
            num = self.rows[i][rhs_col]
            if best_row is None:
                best_row, best_num, best_den = i, num, a
                ties = [i]
                continue
            lhs = num * best_den
            rhs = best_num * a
            if lhs < rhs:
                best_row, best_num, best_den = i, num, a
                ties = [i]
            elif lhs == rhs:
                ties.append(i)
        if best_row is None:
            return None
        if len(ties) == 1:
            return best_row
        winner = ties[0]
        for i in ties[1:]:
            if self._lex_less(i, winner, self.rows[i][c], self.rows[winner][c]):
                winner = i
        return winner

    def run_phase(self, phase: int) -> str:
        zname = "z1" if phase == 1 else "z2"
        while True:
            zrow = getattr(self, zname)
            c = self._entering(zrow, allow_artificial=(phase == 1))
            if c is None:
                return "optimal"
            r = self._leaving(c)
            if r is None:
                return "unbounded"
            self.pivot(r, c)

    # -- extraction ---------------------------------------------------------

    def phase1_value(self) -> Fraction:
        return -Fraction(self.z1[self.n_cols], self.z1_den)

    def drive_out_artificials(self) -> None:
        for i in range(self.m):
            if not self.active[i] or self.basis[i] not in self.art_cols:
                continue
            row = self.rows[i]
            target = None
            for j in range(self.n_cols):
                if j not in self.art_cols and row[j] != 0:
                    target = j
                    break
            if target is None:
                self.active[i] = False  # redundant row
            else:
                self.pivot(i, target)

    def column_values(self) -> dict[int, Fraction]:
        values: dict[int, Fraction] = {}
        rhs_col = self.n_cols
        for i in range(self.m):
            if self.active[i] and self.basis[i] < self.n_struct:
                values[self.basis[i]] = Fraction(self.rows[i][rhs_col], self.dens[i])
        return values

    def row_multipliers(self, zname: str, art_cost: int) -> list[Fraction]:
        """y_i = cost(init col of row i) - reduced cost(init col of row i)."""
        zrow = getattr(self, zname)
        zden = getattr(self, zname + "_den")
        out = []
        for i in range(self.m):
            if i in self.art_of_row:
                col = self.art_of_row[i]
                base_cost = art_cost
            else:
                col = self.slack_of_row[i]
                base_cost = 0
            out.append(base_cost - Fraction(zrow[col], zden))
        return out


# ---------------------------------------------------------------------------
# Public solve / check.
# ---------------------------------------------------------------------------


def _witness_from_columns(canon: _Canonical, values: dict[int, Fraction]) -> dict[str, Fraction]:
    witness = {}
    for var, cols in canon.col_of_var.items():
        kind = canon.columns[cols[0]].kind
        if kind == "shift":
            witness[var] = canon.columns[cols[0]].offset + values.get(cols[0], Fraction(0))
        elif kind == "flip":
            witness[var] = canon.columns[cols[0]].offset - values.get(cols[0], Fraction(0))
        else:
            witness[var] = values.get(cols[0], Fraction(0)) - values.get(
                cols[1], Fraction(0)
            )
    return witness


def _translate_multipliers(
    canon: _Canonical,
    simplex: _Simplex,
    y_canon: list[Fraction],
    reduced_cost,
) -> dict[tuple, Fraction]:
    """Map canonical-row duals plus column reduced costs to normalized keys."""
    y_norm: dict[tuple, Fraction] = {}
    for i, key in enumerate(canon.keys):
        value = -simplex.sigma[i] * y_canon[i]
        if value != 0:
            y_norm[key] = value
    # bound multipliers from the reduced costs of the transformed columns
    for var, cols in canon.col_of_var.items():
        kind = canon.columns[cols[0]].kind
        if kind == "shift":
            mu = reduced_cost(cols[0])
            if mu != 0:
                y_norm[("lb", var)] = mu
        elif kind == "flip":
            nu = reduced_cost(cols[0])
            if nu != 0:
                y_norm[("ub", var)] = nu
    return y_norm


def solve(lp: LinearProgram) -> LPOutcome:
    """Exact optimum or certificate; deterministic (Bland's rule)."""
    if not isinstance(lp, LinearProgram):
        raise MalformedLP("solve() needs a LinearProgram")
    canon = _canonicalize(lp)
    simplex = _Simplex(canon)

    if simplex.art_of_row:
        status = simplex.run_phase(1)
        if status != "optimal":  # phase-1 objective is bounded below by 0
            raise RuntimeError("phase 1 cannot be unbounded")
        if simplex.phase1_value() > 0:
            y_canon = simplex.row_multipliers("z1", art_cost=1)

            def p1_reduced(col: int) -> Fraction:
                return Fraction(simplex.z1[col], simplex.z1_den)

            farkas = _translate_multipliers(canon, simplex, y_canon, p1_reduced)
            return LPOutcome(status="infeasible", farkas=farkas)
        simplex.drive_out_artificials()

    if lp.objective is not None:
        status = simplex.run_phase(2)
        if status == "unbounded":
            return LPOutcome(status="unbounded")

    values = simplex.column_values()
    witness = _witness_from_columns(canon, values)
    obj_map = lp.objective_map()
    objective_value = sum(
        (c * witness[v] for v, c in obj_map.items()), Fraction(0)
    )
    y_canon = simplex.row_multipliers("z2", art_cost=0)

    def p2_reduced(col: int) -> Fraction:
        return Fraction(simplex.z2[col], simplex.z2_den)

    if lp.objective is None:
        dual: dict[tuple, Fraction] = {}
    else:
        dual = _translate_multipliers(canon, simplex, y_canon, p2_reduced)
    return LPOutcome(
        status="optimal",
        witness=witness,
        objective_value=objective_value,
        dual=dual,
    )


def _row_value(coeffs: dict[str, Fraction], point: dict[str, Fraction]) -> Fraction:
    return sum((c * point.get(v, Fraction(0)) for v, c in coeffs.items()), Fraction(0))


def check_witness(lp: LinearProgram, outcome: LPOutcome) -> bool:
    """Re-verify an outcome by exact substitution; no pivoting.

    Optimal outcomes need primal feasibility, an exact objective value and
    dual multipliers establishing stationarity plus equal objectives.
    Infeasible outcomes need a Farkas vector combining the normalized rows
    into a contradiction.  Anything else fails.
    """
    try:
        rows = normalized_rows(lp)
        obj = normalized_objective(lp)
        if outcome.status == "optimal":
            witness = outcome.witness
            if witness is None or set(witness) != set(lp.variables):
                return False
            for row in rows:
                value = _row_value(row.coeffs, witness)
                if row.relation == "=" and value != row.rhs:
                    return False
                if row.relation == "<=" and value > row.rhs:
                    return False
            raw_obj = lp.objective_map()
            expected = sum(
                (c * witness[v] for v, c in raw_obj.items()), Fraction(0)
            )
            if outcome.objective_value != expected:
                return False
            dual = outcome.dual
            if dual is None:
                return False
            row_map = {row.key: row for row in rows}
            if any(key not in row_map for key in dual):
                return False
            for key, y in dual.items():
                if row_map[key].relation == "<=" and y < 0:
                    return False
            for var in lp.variables:
                combined = sum(
                    (y * row_map[key].coeffs.get(var, Fraction(0)) for key, y in dual.items()),
                    Fraction(0),
                )
                if combined != obj.get(var, Fraction(0)):
                    return False
            dual_value = sum(
                (y * row_map[key].rhs for key, y in dual.items()), Fraction(0)
            )
            primal_value = sum(
                (c * witness[v] for v, c in obj.items()), Fraction(0)
            )
            return dual_value == primal_value
        if outcome.status == "infeasible":
            farkas = outcome.farkas
            if not farkas:
                return False
            row_map = {row.key: row for row in rows}
            if any(key not in row_map for key in farkas):
                return False
            for key, y in farkas.items():
                if row_map[key].relation == "<=" and y < 0:
                    return False
            for var in lp.variables:
                combined = sum(
                    (y * row_map[key].coeffs.get(var, Fraction(0)) for key, y in farkas.items()),
                    Fraction(0),
                )
                if combined != 0:
                    return False
            combined_rhs = sum(
                (y * row_map[key].rhs for key, y in farkas.items()), Fraction(0)
            )
            return combined_rhs < 0
        return False
    except (TypeError, ValueError, KeyError, ZeroDivisionError):
        return False


def dump_lp(lp: LinearProgram) -> str:
    """Plain-text dump, one constraint per line, rationals as num/den."""

    def form(terms) -> str:
        parts = [f"{format_rational_short(c)} {v}" for v, c in terms]
        return " + ".join(parts) if parts else "0"

    lines = []
    if lp.objective is None:
        lines.append("feasibility")
    else:
        lines.append(f"{lp.sense}: {form(lp.objective)}")
    for i, con in enumerate(lp.constraints):
        label = con.name or f"con{i}"
        lines.append(
            f"{label}: {form(con.coeffs)} {con.relation} {format_rational_short(con.rhs)}"
        )
    for var, lo in lp.lower:
        lines.append(f"bound: {var} >= {format_rational_short(lo)}")
    for var, hi in lp.upper:
        lines.append(f"bound: {var} <= {format_rational_short(hi)}")
    return "\n".join(lines) + "\n"

"""Core data model: exact-one clauses, occurrence index, assignment records.

Literals are nonzero ints: +v is the variable v, -v its negation.  A clause
is a list of 1..3 literals and is satisfied when *exactly one* of them is
true (counting multiplicity, so a clause like [x, x, y] can never be
satisfied by x).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass


class Conflict:
    """Sentinel returned by operations that prove unsatisfiability."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "CONFLICT"


CONFLICT = Conflict()


class ParseError(ValueError):
    pass


def var_of(lit: int) -> int:
    return abs(lit)


def lit_value(model: dict[int, bool], lit: int) -> bool:
    v = model[var_of(lit)]
    return v if lit > 0 else not v


def clause_key(lits) -> tuple:
    """Canonical ordering key for a clause's literal multiset.

    Used to orient rewrites that could otherwise undo each other: a rewrite
    that replaces a clause is only applied when the replacement's key is
    strictly smaller than the original's.
    """
    return tuple(sorted((var_of(l), 0 if l > 0 else 1) for l in lits))


# ---------------------------------------------------------------------------
# Assignment records.
#
# Every variable that disappears from a formula gets exactly one record
# saying how to recover its value from the variables that remain.  Records
# are appended in elimination order and replayed in reverse by
# ``reconstruct``.


@dataclass
class Bind:
    var: int
    value: bool


@dataclass
class Alias:
    """``var`` takes the current value of ``lit``.

    The right-hand side is evaluated before the assignment, so an alias of a
    variable to its own negation flips it.
    """

    var: int
    lit: int


@dataclass
class Completion:
    """``lit`` is true iff every literal in ``others`` is false."""

    lit: int
    others: tuple[int, ...]


@dataclass
class Free:
    """``var`` is unconstrained; takes ``default`` if nothing else set it."""

    var: int
    default: bool = False


Record = Bind | Alias | Completion | Free


def reconstruct(records: list[Record], model: dict[int, bool]) -> dict[int, bool]:
    """Extend ``model`` (values of the surviving variables) to the eliminated ones."""
    out = dict(model)
    for rec in reversed(records):
        if isinstance(rec, Free):
            out.setdefault(rec.var, rec.default)
        elif isinstance(rec, Bind):
            out[rec.var] = rec.value
        elif isinstance(rec, Alias):
            out[rec.var] = lit_value(out, rec.lit)
        elif isinstance(rec, Completion):
            val = all(not lit_value(out, o) for o in rec.others)
            v = var_of(rec.lit)
            out[v] = val if rec.lit > 0 else not val
        else:  # pragma: no cover
            raise TypeError(f"unknown record {rec!r}")
    return out


# ---------------------------------------------------------------------------


class Formula:
    """A set of exact-one clauses with stable ids and an occurrence index.

    ``occ`` maps each live variable to its occurrence list of
    ``(clause id, position, sign)`` entries (sign is +1 or -1), one entry
    per occurrence, so duplicate literals inside a clause contribute two
    entries.
    """

    def __init__(self):
        self.clauses: dict[int, list[int]] = {}
        self.occ: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
        self.next_id = 1
        self.n_declared = 0  # from a parsed header; 0 when built in memory

    # -- construction -------------------------------------------------------

    @classmethod
    def from_clauses(cls, clause_lists) -> "Formula":
        f = cls()
        for lits in clause_lists:
            f.add_clause(lits)
        return f

    def clone(self) -> "Formula":
        f = Formula()
        f.next_id = self.next_id
        f.n_declared = self.n_declared
        for cid, lits in self.clauses.items():
            f.clauses[cid] = list(lits)
        for v, entries in self.occ.items():
            f.occ[v] = list(entries)
        return f

    # -- mutation -----------------------------------------------------------

    def _index_clause(self, cid: int, lits: list[int]) -> None:
        for pos, l in enumerate(lits):
            self.occ[var_of(l)].append((cid, pos, 1 if l > 0 else -1))

    def _unindex_clause(self, cid: int, lits: list[int]) -> None:
        for v in {var_of(l) for l in lits}:
            entries = [e for e in self.occ[v] if e[0] != cid]
            if entries:
                self.occ[v] = entries
            else:
                del self.occ[v]

    def add_clause(self, lits, cid: int | None = None) -> int:
        """Add a clause; a fresh id is drawn unless ``cid`` is given
        (used when carving sub-formulas that must keep their ids)."""
        lits = list(lits)
        if not 1 <= len(lits) <= 3:
            raise ValueError(f"clause width {len(lits)} out of range: {lits}")
        if any(l == 0 for l in lits):
            raise ValueError("literal 0 is not allowed")
        if cid is None:
            cid = self.next_id
            self.next_id += 1
        elif cid in self.clauses:
            raise ValueError(f"clause id {cid} already present")
        else:
            self.next_id = max(self.next_id, cid + 1)
        self.clauses[cid] = lits
        self._index_clause(cid, lits)
        return cid

    def remove_clause(self, cid: int) -> None:
        lits = self.clauses.pop(cid)
        self._unindex_clause(cid, lits)

    def set_clause(self, cid: int, lits) -> None:
        """Replace the literals of an existing clause, keeping its id."""
        lits = list(lits)
        if not 1 <= len(lits) <= 3:
            raise ValueError(f"clause width {len(lits)} out of range: {lits}")
        self._unindex_clause(cid, self.clauses[cid])
        self.clauses[cid] = lits
        self._index_clause(cid, lits)

    # -- queries ------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def n(self) -> int:
        """Live variable count."""
        return len(self.occ)

    def vars(self) -> list[int]:
        return sorted(self.occ)

    def max_var(self) -> int:
        return max(self.occ, default=0)

    def cids(self) -> list[int]:
        return sorted(self.clauses)

    def clauses_with(self, v: int) -> list[int]:
        return sorted({e[0] for e in self.occ.get(v, ())})

    def degree(self, v: int) -> int:
        """Number of occurrences of ``v``, counting multiplicity."""
        return len(self.occ.get(v, ()))

    def polarity_counts(self, v: int) -> tuple[int, int]:
        """(unnegated, negated) occurrence counts of ``v``, with multiplicity."""
        p = q = 0
        for _, _, sign in self.occ.get(v, ()):
            if sign > 0:
                p += 1
            else:
                q += 1
        return p, q

    def is_singleton(self, v: int) -> bool:
        return self.degree(v) == 1

    def singleton_lits(self, cid: int) -> list[int]:
        return [l for l in self.clauses[cid] if self.is_singleton(var_of(l))]

    def phi(self) -> int:
        """Maximum variable degree (0 for an empty formula)."""
        return max((len(e) for e in self.occ.values()), default=0)

    def check_index(self) -> None:
        """Verify the occurrence index against a from-scratch rebuild."""
        want: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
        for cid, lits in self.clauses.items():
            for pos, l in enumerate(lits):
                want[var_of(l)].append((cid, pos, 1 if l > 0 else -1))
        got = {v: sorted(e) for v, e in self.occ.items()}
        want_s = {v: sorted(e) for v, e in want.items()}
        if got != want_s:
            raise AssertionError("occurrence index out of sync with clauses")

    def __repr__(self) -> str:
        body = ", ".join(str(self.clauses[c]) for c in self.cids())
        return f"Formula(m={self.m}, n={self.n}: {body})"


# ---------------------------------------------------------------------------
# Whole-formula queries.


def polarity_counts(f: Formula, v: int) -> tuple[int, int]:
    return f.polarity_counts(v)


def num_connected_clauses(f: Formula, x: int) -> int:
    """Number of clauses sharing a variable with the clauses containing literal ``x``.

    N(x) is the set of variables (other than x's own) that appear in a
    clause together with the literal ``x``; the count covers every clause
    whose variables intersect N(x), including x's own clauses.
    """
    xv = var_of(x)
    nx: set[int] = set()
    for cid, _, sign in f.occ.get(xv, ()):
        if (sign > 0) == (x > 0):
            for l in f.clauses[cid]:
                if var_of(l) != xv:
                    nx.add(var_of(l))
    count = 0
    for cid, lits in f.clauses.items():
        if any(var_of(l) in nx for l in lits):
            count += 1
    return count


def evaluate_exact(f: Formula, model: dict[int, bool]) -> bool:
    """True iff every clause has exactly one true literal (with multiplicity).

    Raises ``ValueError`` naming the missing variables if the model is not
    total over the formula's variables.
    """
    missing = [v for v in f.vars() if v not in model]
    if missing:
        raise ValueError(f"model is missing variables {missing}")
    for lits in f.clauses.values():
        if sum(1 for l in lits if lit_value(model, l)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Textual substitution and removal.  These are the raw operations: replacing
# a literal by false just deletes it from its clauses, with no exact-one
# bookkeeping.  Rules that need the semantic consequences of an assignment
# go through ``assign_true`` instead.


def substitute(f: Formula, target, replacement, log: list[Record]):
    """Apply a textual substitution in place.

    Returns True if anything changed, False for an absent target, and
    CONFLICT if deleting a literal emptied some clause.  Supported forms:

    * literal -> ``False``: delete that literal from every clause it is in
      and record the forced value;
    * several literals -> ``False``: as above for each literal;
    * literal -> literal: rewrite both polarities (``x <- -y`` sends ``-x``
      to ``y``) and record an alias;
    * clause id -> literal list: replace that clause's literals, same id.
    """
    if isinstance(target, int) and replacement is False:
        return _erase_literal(f, target, log)
    if isinstance(target, (list, tuple, set, frozenset)) and replacement is False:
        changed = False
        for lit in sorted(target):
            got = _erase_literal(f, lit, log)
            if got is CONFLICT:
                return CONFLICT
            changed |= got
        return changed
    if isinstance(target, int) and isinstance(replacement, int):
        return _rewrite_literal(f, target, replacement, log)
    if isinstance(target, int) and isinstance(replacement, (list, tuple)):
        if target not in f.clauses:
            return False
        f.set_clause(target, list(replacement))
        return True
    raise TypeError(f"unsupported substitution {target!r} <- {replacement!r}")


def _erase_literal(f: Formula, lit: int, log: list[Record]):
    v = var_of(lit)
    entries = [e for e in f.occ.get(v, ()) if (e[2] > 0) == (lit > 0)]
    if not entries:
        return False
    log.append(Bind(v, lit < 0))
    conflict = False
    for cid in sorted({e[0] for e in entries}):
        rest = [l for l in f.clauses[cid] if l != lit]
        if rest:
            f.set_clause(cid, rest)
        else:
            # Deleting the only literal leaves an unsatisfiable clause.
            f.remove_clause(cid)
            conflict = True
    return CONFLICT if conflict else True


def _rewrite_literal(f: Formula, old: int, new: int, log: list[Record]) -> bool:
    v = var_of(old)
    entries = list(f.occ.get(v, ()))
    if not entries:
        return False
    log.append(Alias(v, new if old > 0 else -new))
    for cid in sorted({e[0] for e in entries}):
        lits = [
            (new if l == old else (-new if l == -old else l))
            for l in f.clauses[cid]
        ]
        f.set_clause(cid, lits)
    return True


def remove(f: Formula, cids) -> None:
    """Remove one clause or several; missing ids raise ``KeyError``."""
    if isinstance(cids, int):
        cids = [cids]
    ids = list(cids)
    for cid in ids:
        if cid not in f.clauses:
            raise KeyError(f"clause {cid} not in formula")
    for cid in ids:
        f.remove_clause(cid)


# ---------------------------------------------------------------------------
# Text format.


def parse(text: str, cnf_ok: bool = False) -> tuple[Formula, list[Record]]:
    """Parse the line-oriented clause format.

    Returns the formula together with a reconstruction-log seed holding a
    Free record for every declared variable that never occurs, so replaying
    a model through the log is total over the declared range.
    """
    f = Formula()
    n_decl = None
    m_decl = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n_decl is not None:
                raise ParseError(f"line {lineno}: duplicate header")
            parts = line.split()
            formats = ("x3sat", "cnf") if cnf_ok else ("x3sat",)
            if len(parts) != 4 or parts[1] not in formats:
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            try:
                n_decl, m_decl = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: malformed header {line!r}") from None
            if n_decl < 0 or m_decl < 0:
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            continue
        if n_decl is None:
            raise ParseError(f"line {lineno}: clause before header")
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: not an integer line {line!r}") from None
        if nums[-1] != 0:
            raise ParseError(f"line {lineno}: clause line must end with 0")
        lits = nums[:-1]
        if any(l == 0 for l in lits):
            raise ParseError(f"line {lineno}: literal 0 inside clause")
        if not 1 <= len(lits) <= 3:
            raise ParseError(f"line {lineno}: clause width {len(lits)} out of range")
        bad = [l for l in lits if var_of(l) > n_decl]
        if bad:
            raise ParseError(
                f"line {lineno}: variable {var_of(bad[0])} out of declared range 1..{n_decl}"
            )
        f.add_clause(lits)
    if n_decl is None:
        raise ParseError("line 1: missing header")
    if m_decl != f.m:
        raise ParseError(f"header declares {m_decl} clauses but {f.m} were given")
    f.n_declared = n_decl
    seed: list[Record] = [
        Free(v) for v in range(1, n_decl + 1) if v not in f.occ
    ]
    return f, seed


def serialize(f: Formula) -> str:
    """Deterministic text form: clauses by id, literals by (variable, sign)."""
    n = max(f.n_declared, f.max_var())
    out = [f"p x3sat {n} {f.m}"]
    for cid in f.cids():
        lits = sorted(f.clauses[cid], key=lambda l: (var_of(l), 0 if l > 0 else 1))
        out.append(" ".join(str(l) for l in lits) + " 0")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------


def assign_true(f: Formula, lits, log: list[Record]) -> None | Conflict:
    """Make each literal in ``lits`` true, cascading forced assignments.

    A clause with a true literal forces all its other literals false (and is
    removed); false literals are deleted in place.  Clauses shrunk to width
    1 or 2 are left for the rewrite pass to pick up.  Returns CONFLICT if a
    clause gets two true literals, loses all its literals, or a variable is
    forced both ways.
    """
    bound: dict[int, bool] = {}
    queue: list[int] = list(lits)
    while queue:
        lit = queue.pop()
        v = var_of(lit)
        want = lit > 0
        if v in bound:
            if bound[v] != want:
                return CONFLICT
            continue
        bound[v] = want
        log.append(Bind(v, want))
        for cid in sorted({e[0] for e in f.occ.get(v, ())}):
            if cid not in f.clauses:
                continue
            cl = f.clauses[cid]
            ntrue = sum(1 for l in cl if l == lit)
            if ntrue >= 2:
                return CONFLICT
            if ntrue == 1:
                # Clause satisfied: every other literal must be false.
                for o in cl:
                    if o != lit:
                        queue.append(-o)
                f.remove_clause(cid)
            else:
                rest = [l for l in cl if var_of(l) != v]
                if not rest:
                    return CONFLICT
                f.set_clause(cid, rest)
    return None

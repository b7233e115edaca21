"""Terms of the free algebra: variables, names, function applications and natural literals.

Terms are immutable and hash-consed at construction time (each node caches
its hash), so equality checks used by the indexes are cheap in the common
case of unequal terms. Substitutions are plain dicts from `Var` to `Term`
and are never mutated once returned.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from typing import override

_FRESH = itertools.count(1)


class SymbolKind(StrEnum):
    CONSTRUCTOR = "constructor"
    DATA = "data-constructor"
    NAME = "name"
    DESTRUCTOR = "destructor"


@dataclass(frozen=True, slots=True)
class Symbol:
    """A declared function symbol.

    Names are nullary symbols; `private` only matters for names (public names
    are known to the adversary from the start).
    """

    ident: str
    arity: int
    kind: SymbolKind
    private: bool = False

    @override
    def __str__(self) -> str:
        return self.ident


@dataclass(frozen=True, slots=True, eq=False)
class Var:
    ident: str
    uid: int
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("var", self.ident, self.uid)))

    @override
    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, Var) and self.uid == other.uid and self.ident == other.ident

    @override
    def __hash__(self) -> int:
        return self._hash

    @override
    def __str__(self) -> str:
        return self.ident


@dataclass(frozen=True, slots=True, eq=False)
class App:
    symbol: Symbol
    args: tuple[Term, ...] = ()
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((self.symbol.ident, self.args)))

    @override
    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, App) or self._hash != other._hash:
            return False
        return self.symbol.ident == other.symbol.ident and self.args == other.args

    @override
    def __hash__(self) -> int:
        return self._hash

    @override
    def __str__(self) -> str:
        if not self.args:
            return self.symbol.ident
        return f"{self.symbol.ident}({','.join(str(arg) for arg in self.args)})"


@dataclass(frozen=True, slots=True)
class Nat:
    """Natural-number literal; a leaf, not a unary encoding."""

    value: int

    @override
    def __str__(self) -> str:
        return str(self.value)


type Term = Var | App | Nat
type Substitution = dict[Var, Term]


@dataclass(frozen=True, slots=True)
class RewriteRule:
    """Destructor rule `destructor(lhs_args) -> rhs`."""

    destructor: Symbol
    lhs_args: tuple[Term, ...]
    rhs: Term

    @override
    def __str__(self) -> str:
        return f"{self.destructor.ident}({','.join(str(arg) for arg in self.lhs_args)}) -> {self.rhs}"


def fresh_var(ident: str) -> Var:
    """Return a variable with a process-unique id."""
    return Var(ident, next(_FRESH))


def name(symbol: Symbol) -> App:
    return App(symbol, ())


def variables(term: Term) -> Iterator[Var]:
    """Yield the variables of `term` in left-to-right order, with repetitions."""
    match term:
        case Var():
            yield term
        case App(args=args):
            for arg in args:
                yield from variables(arg)
        case Nat():
            return


def variables_of(terms: Iterable[Term]) -> dict[Var, None]:
    """Ordered set of variables occurring in `terms`."""
    seen: dict[Var, None] = {}
    for term in terms:
        for var in variables(term):
            seen.setdefault(var, None)
    return seen


def occurs(var: Var, term: Term) -> bool:
    match term:
        case Var():
            return term == var
        case App(args=args):
            return any(occurs(var, arg) for arg in args)
        case Nat():
            return False


def depth(term: Term) -> int:
    match term:
        case App(args=args) if args:
            return 1 + max(depth(arg) for arg in args)
        case _:
            return 1


def size(term: Term) -> int:
    match term:
        case App(args=args):
            return 1 + sum(size(arg) for arg in args)
        case _:
            return 1


def symbols(term: Term) -> Iterator[str]:
    """Yield the idents of every symbol occurrence in preorder."""
    if isinstance(term, App):
        yield term.symbol.ident
        for arg in term.args:
            yield from symbols(arg)


def subterms(term: Term) -> Iterator[Term]:
    yield term
    if isinstance(term, App):
        for arg in term.args:
            yield from subterms(arg)


def apply(subst: Mapping[Var, Term], term: Term) -> Term:
    """Replace every variable of dom(subst) by its image, simultaneously."""
    if not subst:
        return term
    match term:
        case Var():
            return subst.get(term, term)
        case App(args=args) if args:
            new_args = tuple(apply(subst, arg) for arg in args)
            if all(new is old for new, old in zip(new_args, args, strict=True)):
                return term
            return App(term.symbol, new_args)
        case _:
            return term


def compose(first: Mapping[Var, Term], second: Mapping[Var, Term]) -> Substitution:
    """Substitution equivalent to applying `first` then `second`."""
    composed: Substitution = {var: apply(second, term) for var, term in first.items()}
    for var, term in second.items():
        composed.setdefault(var, term)
    return {var: term for var, term in composed.items() if term != var}


def _walk(term: Term, bindings: Mapping[Var, Term]) -> Term:
    while isinstance(term, Var) and term in bindings:
        term = bindings[term]
    return term


def _occurs_walk(var: Var, term: Term, bindings: Mapping[Var, Term]) -> bool:
    term = _walk(term, bindings)
    match term:
        case Var():
            return term == var
        case App(args=args):
            return any(_occurs_walk(var, arg, bindings) for arg in args)
        case Nat():
            return False


def _resolve(term: Term, bindings: Mapping[Var, Term]) -> Term:
    term = _walk(term, bindings)
    if isinstance(term, App) and term.args:
        return App(term.symbol, tuple(_resolve(arg, bindings) for arg in term.args))
    return term


def unify_pairs(
    pairs: Iterable[tuple[Term, Term]],
    base: Mapping[Var, Term] | None = None,
    *,
    prefer: frozenset[Var] = frozenset(),
) -> Substitution | None:
    """Most general simultaneous unifier of `pairs`, extending the idempotent `base`.

    When two unbound variables meet, a variable from `prefer` is the one that
    gets bound. Returns None on symbol clash, arity clash or occur-check failure.
    """
    bindings: dict[Var, Term] = dict(base) if base else {}
    stack = list(pairs)
    while stack:
        left, right = stack.pop()
        left = _walk(left, bindings)
        right = _walk(right, bindings)
        if left is right or left == right:
            continue
        if isinstance(right, Var) and (not isinstance(left, Var) or (right in prefer and left not in prefer)):
            left, right = right, left
        match left:
            case Var():
                if _occurs_walk(left, right, bindings):
                    return None
                bindings[left] = right
            case App():
                if (
                    not isinstance(right, App)
                    or left.symbol.ident != right.symbol.ident
                    or len(left.args) != len(right.args)
                ):
                    return None
                stack.extend(zip(left.args, right.args, strict=True))
            case Nat():
                return None
    return {var: _resolve(term, bindings) for var, term in bindings.items()}


def unify(left: Term, right: Term, base: Mapping[Var, Term] | None = None) -> Substitution | None:
    """Most general unifier of two terms (occur check always on)."""
    return unify_pairs([(left, right)], base)


def match_into(pattern: Term, target: Term, subst: Substitution) -> bool:
    """Extend `subst` in place so that apply(subst, pattern) == target.

    Variables of `target` are treated as constants. On failure `subst` may be
    partially extended; callers pass a copy when they need to backtrack.
    """
    match pattern:
        case Var():
            bound = subst.get(pattern)
            if bound is None:
                subst[pattern] = target
                return True
            return bound == target
        case App(args=args):
            if (
                not isinstance(target, App)
                or pattern.symbol.ident != target.symbol.ident
                or len(args) != len(target.args)
            ):
                return False
            return all(match_into(p, t, subst) for p, t in zip(args, target.args, strict=True))
        case Nat():
            return pattern == target


def match(pattern: Term, target: Term, base: Mapping[Var, Term] | None = None) -> Substitution | None:
    """One-sided unification: σ with apply(σ, pattern) == target, or None."""
    subst: Substitution = dict(base) if base else {}
    if not match_into(pattern, target, subst):
        return None
    return subst


def renaming(vars_: Iterable[Var]) -> Substitution:
    """Fresh-variable renaming for `vars_`."""
    return {var: fresh_var(var.ident) for var in vars_}


def canonical_renaming(vars_: Iterable[Var]) -> Substitution:
    """Deterministic renaming to v0, v1, ... in order of first appearance."""
    return {var: Var(f"v{index}", -index - 1) for index, var in enumerate(dict.fromkeys(vars_))}

"""Formula AST, parser, desugaring, fragment classification, and
propositional evaluation over descriptor elements.

Surface syntax (ASCII): letters `[a-zA-Z_][a-zA-Z0-9_]*`, constants
`true`/`false`, connectives `!`, `&`, `|`, `->` (right-associative), and
modalities `<A>`, `[A]`, ..., with `~` marking inverses (`<~B>`, `[~A]`).
Precedence: unary operators bind tightest, then `&`, then `|`, then `->`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import NotInFragment, NotPropositional, ParseError, UnknownModality
from .model import DescriptorElement, KripkeStructure


class Modality(enum.Enum):
    A = "A"
    B = "B"
    E = "E"
    ABAR = "~A"
    BBAR = "~B"
    EBAR = "~E"
    L = "L"
    D = "D"
    O = "O"
    LBAR = "~L"
    DBAR = "~D"
    OBAR = "~O"

    @property
    def text(self):
        return self.value

    @property
    def primitive(self):
        return self in _PRIMITIVE


_PRIMITIVE = frozenset(
    {Modality.A, Modality.B, Modality.E, Modality.ABAR, Modality.BBAR, Modality.EBAR}
)


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Const:
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    mod: Modality
    sub: "Formula"


@dataclass(frozen=True)
class Box:
    mod: Modality
    sub: "Formula"


Formula = Union[Prop, Const, Not, And, Or, Implies, Diamond, Box]

_BINARY = (And, Or, Implies)
_MODAL = (Diamond, Box)


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Postorder traversal (children before parents), duplicates included."""
    if isinstance(phi, _BINARY):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, (Not,) + _MODAL):
        yield from subformulas(phi.sub)
    yield phi


def formula_size(phi: Formula) -> int:
    """Number of AST nodes."""
    return sum(1 for _ in subformulas(phi))


def modal_count(phi: Formula) -> int:
    return sum(1 for f in subformulas(phi) if isinstance(f, _MODAL))


def modalities_used(phi: Formula) -> frozenset:
    return frozenset(f.mod for f in subformulas(phi) if isinstance(f, _MODAL))


def prop_letters(phi: Formula) -> frozenset:
    return frozenset(f.name for f in subformulas(phi) if isinstance(f, Prop))


def is_propositional(phi: Formula) -> bool:
    return not any(isinstance(f, _MODAL) for f in subformulas(phi))


# ---------------------------------------------------------------------------
# Parsing


_MOD_BY_TEXT = {m.text: m for m in Modality}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._scan()
        self.index = 0

    def _scan(self):
        text, n = self.text, len(self.text)
        i = 0
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c in "()!&|":
                self.tokens.append((c, c, i))
                i += 1
            elif c == "-":
                if i + 1 < n and text[i + 1] == ">":
                    self.tokens.append(("->", "->", i))
                    i += 2
                else:
                    raise ParseError("expected '->'", column=i + 1)
            elif c in "<[":
                close = ">" if c == "<" else "]"
                j = text.find(close, i + 1)
                if j < 0:
                    raise ParseError(f"unterminated modality starting with {c!r}", column=i + 1)
                inner = text[i + 1 : j].replace(" ", "")
                if inner not in _MOD_BY_TEXT:
                    raise UnknownModality(f"unknown modality {inner!r}", column=i + 1)
                kind = "diamond" if c == "<" else "box"
                self.tokens.append((kind, inner, i))
                i = j + 1
            elif c.isalpha() or c == "_":
                j = i + 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if word in ("true", "false"):
                    self.tokens.append((word, word, i))
                else:
                    self.tokens.append(("ident", word, i))
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}", column=i + 1)

    def peek(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return ("eof", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.index += 1
        return tok


def parse_formula(text: str) -> Formula:
    """Parse surface syntax into an AST; sugar modalities are kept intact."""
    lex = _Lexer(text)
    phi = _parse_implies(lex)
    kind, value, pos = lex.peek()
    if kind != "eof":
        raise ParseError(f"unexpected trailing input {value!r}", column=pos + 1)
    return phi


def _parse_implies(lex) -> Formula:
    left = _parse_or(lex)
    if lex.peek()[0] == "->":
        lex.take()
        return Implies(left, _parse_implies(lex))
    return left


def _parse_or(lex) -> Formula:
    phi = _parse_and(lex)
    while lex.peek()[0] == "|":
        lex.take()
        phi = Or(phi, _parse_and(lex))
    return phi


def _parse_and(lex) -> Formula:
    phi = _parse_unary(lex)
    while lex.peek()[0] == "&":
        lex.take()
        phi = And(phi, _parse_unary(lex))
    return phi


def _parse_unary(lex) -> Formula:
    kind, value, pos = lex.peek()
    if kind == "!":
        lex.take()
        return Not(_parse_unary(lex))
    if kind == "diamond":
        lex.take()
        return Diamond(_MOD_BY_TEXT[value], _parse_unary(lex))
    if kind == "box":
        lex.take()
        return Box(_MOD_BY_TEXT[value], _parse_unary(lex))
    return _parse_atom(lex)


def _parse_atom(lex) -> Formula:
    kind, value, pos = lex.take()
    if kind == "true":
        return TRUE
    if kind == "false":
        return FALSE
    if kind == "ident":
        return Prop(value)
    if kind == "(":
        phi = _parse_implies(lex)
        k, v, p = lex.take()
        if k != ")":
            raise ParseError("expected ')'", column=p + 1)
        return phi
    raise ParseError(f"missing operand (found {value or kind!r})", column=pos + 1)


def to_text(phi: Formula) -> str:
    """Render an AST back to surface syntax (parses back to the same tree)."""
    return _pp(phi)


def _atomic(phi):
    return isinstance(phi, (Prop, Const))


def _pp(phi) -> str:
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, Const):
        return "true" if phi.value else "false"
    if isinstance(phi, Not):
        return "!" + (_pp(phi.sub) if _atomic(phi.sub) else f"({_pp(phi.sub)})")
    if isinstance(phi, (Diamond, Box)):
        op = f"<{phi.mod.text}>" if isinstance(phi, Diamond) else f"[{phi.mod.text}]"
        return f"{op} {_pp(phi.sub)}" if _atomic(phi.sub) else f"{op}({_pp(phi.sub)})"
    if isinstance(phi, And):
        return f"{_pp_operand(phi.left, And)} & {_pp_operand(phi.right, None)}"
    if isinstance(phi, Or):
        return f"{_pp_operand(phi.left, Or)} | {_pp_operand(phi.right, None)}"
    if isinstance(phi, Implies):
        lhs = f"({_pp(phi.left)})" if isinstance(phi.left, Implies) else _pp(phi.left)
        return f"{lhs} -> {_pp(phi.right)}"
    raise TypeError(f"not a formula node: {phi!r}")


def _pp_operand(phi, left_of) -> str:
    # Binary connectives parse left-associatively, so only a left operand
    # of the same connective may stay bare.
    if _atomic(phi) or isinstance(phi, Not) or (left_of is not None and isinstance(phi, left_of)):
        return _pp(phi)
    return f"({_pp(phi)})"


# ---------------------------------------------------------------------------
# Desugaring

# Rewrites into the six primitive modalities under strict semantics; the
# bounded-oracle equivalence tests exercise each rule against a direct
# implementation of the corresponding interval relation.
_SUGAR = {
    Modality.L: (Modality.A, Modality.A),
    Modality.D: (Modality.B, Modality.E),
    Modality.O: (Modality.E, Modality.BBAR),
    Modality.LBAR: (Modality.ABAR, Modality.ABAR),
    Modality.DBAR: (Modality.BBAR, Modality.EBAR),
    Modality.OBAR: (Modality.B, Modality.EBAR),
}


def desugar(phi: Formula) -> Formula:
    """Rewrite L/D/O modalities (and inverses) into the six primitives."""
    if isinstance(phi, (Prop, Const)):
        return phi
    if isinstance(phi, Not):
        return Not(desugar(phi.sub))
    if isinstance(phi, And):
        return And(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, Or):
        return Or(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, Implies):
        return Implies(desugar(phi.left), desugar(phi.right))
    sub = desugar(phi.sub)
    node = type(phi)
    if phi.mod.primitive:
        return node(phi.mod, sub)
    outer, inner = _SUGAR[phi.mod]
    return node(outer, node(inner, sub))


# ---------------------------------------------------------------------------
# Fragment classification


@dataclass(frozen=True)
class Fragment:
    """Grammar membership flags for a desugared formula."""

    prop: bool
    exists_aabe: bool
    forall_aabe: bool
    ab_bar: bool
    modalities: frozenset

    def names(self):
        out = []
        if self.prop:
            out.append("Prop")
        if self.exists_aabe:
            out.append("ExistsAABE")
        if self.forall_aabe:
            out.append("ForallAABE")
        if self.ab_bar:
            out.append("ABbar")
        return tuple(out)


_EXISTS_MODS = frozenset({Modality.A, Modality.B, Modality.E, Modality.ABAR})
_AB_MODS = frozenset({Modality.A, Modality.BBAR})


def classify(phi: Formula) -> Fragment:
    """Fragment membership of a desugared formula."""
    mods = modalities_used(phi)
    if not all(m.primitive for m in mods):
        raise ValueError("classify expects a desugared formula")
    return Fragment(
        prop=not mods,
        exists_aabe=_member_exists(phi),
        forall_aabe=_member_forall(phi),
        ab_bar=mods <= _AB_MODS,
        modalities=mods,
    )


def _member_exists(phi) -> bool:
    if is_propositional(phi):
        return True
    if isinstance(phi, Or):
        return _member_exists(phi.left) and _member_exists(phi.right)
    if isinstance(phi, Diamond) and phi.mod in _EXISTS_MODS:
        return _member_exists(phi.sub)
    return False


def _member_forall(phi) -> bool:
    if is_propositional(phi):
        return True
    if isinstance(phi, And):
        return _member_forall(phi.left) and _member_forall(phi.right)
    if isinstance(phi, Box) and phi.mod in _EXISTS_MODS:
        return _member_forall(phi.sub)
    return False


def negate_to_exists(psi: Formula) -> Formula:
    """Equivalent of the negation of a universal-fragment formula, with
    boxes dualized to diamonds, conjunctions to disjunctions, and negation
    pushed down to the propositional leaves. At most doubles the size.
    """
    if not _member_forall(psi):
        raise NotInFragment("negate_to_exists expects a ForallAABE formula")
    return _neg(psi)


def _neg(phi) -> Formula:
    if is_propositional(phi):
        return _neg_prop(phi)
    if isinstance(phi, And):
        return Or(_neg(phi.left), _neg(phi.right))
    if isinstance(phi, Box):
        return Diamond(phi.mod, _neg(phi.sub))
    raise NotInFragment(f"unexpected node under negation: {phi!r}")


def _neg_prop(phi) -> Formula:
    if isinstance(phi, Prop):
        return Not(phi)
    if isinstance(phi, Const):
        return FALSE if phi.value else TRUE
    if isinstance(phi, Not):
        return phi.sub
    if isinstance(phi, And):
        return Or(_neg_prop(phi.left), _neg_prop(phi.right))
    if isinstance(phi, Or):
        return And(_neg_prop(phi.left), _neg_prop(phi.right))
    if isinstance(phi, Implies):
        return And(phi.left, _neg_prop(phi.right))
    raise NotPropositional(f"not a propositional node: {phi!r}")


# ---------------------------------------------------------------------------
# Propositional evaluation


def eval_prop(beta: Formula, letters) -> bool:
    """Evaluate a Boolean combination with exactly the given letters true."""
    if isinstance(beta, Prop):
        return beta.name in letters
    if isinstance(beta, Const):
        return beta.value
    if isinstance(beta, Not):
        return not eval_prop(beta.sub, letters)
    if isinstance(beta, And):
        return eval_prop(beta.left, letters) and eval_prop(beta.right, letters)
    if isinstance(beta, Or):
        return eval_prop(beta.left, letters) or eval_prop(beta.right, letters)
    if isinstance(beta, Implies):
        return not eval_prop(beta.left, letters) or eval_prop(beta.right, letters)
    raise NotPropositional(f"modal node in propositional evaluation: {beta!r}")


def val(beta: Formula, d: DescriptorElement, K: KripkeStructure) -> bool:
    """Evaluate a Boolean combination over a descriptor element: a letter is
    true iff it labels the endpoints and every interior state, which equals
    its truth on any track the element abstracts.
    """
    letters = K.labels[d.v_in] & K.labels[d.v_fin]
    for s in d.interior:
        letters = letters & K.labels[s]
    return eval_prop(beta, letters)

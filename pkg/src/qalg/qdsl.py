"""The .qalg presentation language: lexer, recursive-descent parser, printer.

Grammar (whitespace-insensitive, # line comments):

    algebra  ::= "algebra" IDENT "{" stmt* "}"
    stmt     ::= "field" "=" INT ";" | "vertices" "=" INT ";"
               | "max_length" "=" INT ";"
               | "arrows" "{" (IDENT ":" INT "->" INT ";")* "}"
               | "relations" "{" (relexpr ";")* "}"
    relexpr  ::= term ("+" term)*
    term     ::= (INT "*")? IDENT ("*" IDENT)*

Relation paths are written left to right in traversal order.  Every
diagnostic carries a 1-based line and column.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    BadModulusAt,
    DuplicateArrow,
    QdslError,
    QdslSyntaxError,
    UnknownForm,
    UnknownVertex,
    VertexOutOfRange,
)
from .linalg import DEFAULT_MODULUS, is_prime
from .quiver import Arrow, MAX_LENGTH_DEFAULT, Quiver, Relation


# -- lexer --------------------------------------------------------------------

_SYMBOLS = {
    "{": "LBRACE",
    "}": "RBRACE",
    ";": "SEMI",
    ":": "COLON",
    "*": "STAR",
    "+": "PLUS",
    "=": "EQ",
    "(": "LPAREN",
    ")": "RPAREN",
    ",": "COMMA",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(Token("ARROW", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in _SYMBOLS:
            tokens.append(Token(_SYMBOLS[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise QdslSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class ArrowDecl:
    name: str
    source: int
    target: int
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RelTerm:
    coeff: int
    arrows: tuple[str, ...]


@dataclass(frozen=True)
class RelationExpr:
    terms: tuple[RelTerm, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PresentationAST:
    name: str
    modulus: int
    n_vertices: int
    arrows: tuple[ArrowDecl, ...]
    relations: tuple[RelationExpr, ...]
    max_length: int | None = None


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise QdslSyntaxError(
                f"got {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
                tok.line,
                tok.col,
                expected=what,
            )
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.text != word:
            raise QdslSyntaxError(
                f"got {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
                tok.line,
                tok.col,
                expected=f"'{word}'",
            )
        return self.advance()

    def expect_int(self, what: str) -> tuple[int, Token]:
        tok = self.expect("INT", what)
        return int(tok.text), tok


def parse_presentation(text: str) -> PresentationAST:
    parser = _Parser(tokenize(text))
    parser.expect_keyword("algebra")
    name = parser.expect("IDENT", "algebra name").text
    parser.expect("LBRACE", "'{'")

    modulus: int | None = None
    n_vertices: int | None = None
    max_length: int | None = None
    arrows: list[ArrowDecl] = []
    relations: list[RelationExpr] = []
    seen_scalar: set[str] = set()

    while parser.peek().kind != "RBRACE":
        tok = parser.peek()
        if tok.kind != "IDENT":
            raise QdslSyntaxError(
                f"got {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
                tok.line,
                tok.col,
                expected="a statement or '}'",
            )
        if tok.text in ("field", "vertices", "max_length"):
            parser.advance()
            if tok.text in seen_scalar:
                raise QdslSyntaxError(f"duplicate '{tok.text}' statement", tok.line, tok.col)
            seen_scalar.add(tok.text)
            parser.expect("EQ", "'='")
            value, vtok = parser.expect_int("an integer")
            parser.expect("SEMI", "';'")
            if tok.text == "field":
                if not is_prime(value):
                    raise BadModulusAt(f"field modulus {value} is not prime", vtok.line, vtok.col)
                modulus = value
            elif tok.text == "vertices":
                if value < 1:
                    raise UnknownVertex("vertex count must be at least 1", vtok.line, vtok.col)
                n_vertices = value
            else:
                max_length = value
        elif tok.text == "arrows":
            parser.advance()
            parser.expect("LBRACE", "'{'")
            while parser.peek().kind != "RBRACE":
                name_tok = parser.expect("IDENT", "an arrow name")
                parser.expect("COLON", "':'")
                src, _ = parser.expect_int("a source vertex")
                parser.expect("ARROW", "'->'")
                tgt, _ = parser.expect_int("a target vertex")
                parser.expect("SEMI", "';'")
                arrows.append(ArrowDecl(name_tok.text, src, tgt, name_tok.line, name_tok.col))
            parser.expect("RBRACE", "'}'")
        elif tok.text == "relations":
            parser.advance()
            parser.expect("LBRACE", "'{'")
            while parser.peek().kind != "RBRACE":
                relations.append(_parse_relexpr(parser))
                parser.expect("SEMI", "';'")
            parser.expect("RBRACE", "'}'")
        else:
            raise QdslSyntaxError(
                f"unknown statement {tok.text!r}",
                tok.line,
                tok.col,
                expected="field, vertices, max_length, arrows, or relations",
            )
    parser.expect("RBRACE", "'}'")
    parser.expect("EOF", "end of input")

    if n_vertices is None:
        raise QdslSyntaxError("missing 'vertices' statement", 1, 1)
    ast = PresentationAST(
        name=name,
        modulus=modulus if modulus is not None else DEFAULT_MODULUS,
        n_vertices=n_vertices,
        arrows=tuple(arrows),
        relations=tuple(relations),
        max_length=max_length,
    )
    _validate_ast(ast)
    return ast


def _parse_relexpr(parser: _Parser) -> RelationExpr:
    first = parser.peek()
    terms = [_parse_term(parser)]
    while parser.peek().kind == "PLUS":
        parser.advance()
        terms.append(_parse_term(parser))
    return RelationExpr(tuple(terms), first.line, first.col)


def _parse_term(parser: _Parser) -> RelTerm:
    coeff = 1
    tok = parser.peek()
    if tok.kind == "INT":
        parser.advance()
        coeff = int(tok.text)
        parser.expect("STAR", "'*'")
    names = [parser.expect("IDENT", "an arrow name").text]
    while parser.peek().kind == "STAR":
        parser.advance()
        names.append(parser.expect("IDENT", "an arrow name").text)
    return RelTerm(coeff, tuple(names))


def _validate_ast(ast: PresentationAST) -> None:
    seen: dict[str, ArrowDecl] = {}
    for decl in ast.arrows:
        if decl.name in seen:
            raise DuplicateArrow(f"arrow {decl.name!r} declared twice", decl.line, decl.col)
        seen[decl.name] = decl
        for endpoint in (decl.source, decl.target):
            if not 1 <= endpoint <= ast.n_vertices:
                raise UnknownVertex(
                    f"arrow {decl.name!r} uses vertex {endpoint} outside 1..{ast.n_vertices}",
                    decl.line,
                    decl.col,
                )
    for rel in ast.relations:
        for term in rel.terms:
            for name in term.arrows:
                if name not in seen:
                    raise QdslError(f"unknown arrow {name!r} in relation", rel.line, rel.col)


def ast_to_inputs(ast: PresentationAST) -> tuple[Quiver, list[Relation], int, int]:
    """Quiver, relations, modulus, and max_length for the compiler.

    Non-composable relation terms denote zero in the path algebra and are
    dropped; a relation whose terms all vanish is dropped entirely.
    """
    quiver = Quiver(ast.n_vertices, [Arrow(d.name, d.source, d.target) for d in ast.arrows])
    relations = []
    for rel in ast.relations:
        terms = []
        for term in rel.terms:
            path = quiver.path_from_names(list(term.arrows))
            if path is not None:
                terms.append((term.coeff, path))
        if terms:
            relations.append(Relation(tuple(terms)))
    max_length = ast.max_length if ast.max_length is not None else MAX_LENGTH_DEFAULT
    return quiver, relations, ast.modulus, max_length


def pretty_print(ast: PresentationAST) -> str:
    lines = [f"algebra {ast.name} {{"]
    lines.append(f"  field = {ast.modulus};")
    lines.append(f"  vertices = {ast.n_vertices};")
    if ast.max_length is not None:
        lines.append(f"  max_length = {ast.max_length};")
    lines.append("  arrows {")
    for decl in ast.arrows:
        lines.append(f"    {decl.name}: {decl.source} -> {decl.target};")
    lines.append("  }")
    lines.append("  relations {")
    for rel in ast.relations:
        rendered = []
        for term in rel.terms:
            word = "*".join(term.arrows)
            rendered.append(word if term.coeff == 1 else f"{term.coeff}*{word}")
        lines.append(f"    {' + '.join(rendered)};")
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def presentation_from_algebra(name, quiver, relations, modulus, max_length=None) -> PresentationAST:
    decls = tuple(ArrowDecl(a.name, a.source, a.target) for a in quiver.arrows)
    rels = []
    for rel in relations:
        terms = tuple(
            RelTerm(int(coeff), tuple(quiver.arrows[i].name for i in path.arrows))
            for coeff, path in rel.terms
        )
        rels.append(RelationExpr(terms))
    return PresentationAST(name, modulus, quiver.n, decls, tuple(rels), max_length)


# -- module specifiers ---------------------------------------------------------


@dataclass(frozen=True)
class ModuleSpec:
    """P(i) | S(i) | A | rand(seed, budget), or a sum of these."""

    parts: tuple[tuple, ...]


def parse_module_spec(text: str, algebra) -> ModuleSpec:
    parser = _Parser(tokenize(text))
    parts = [_parse_spec_atom(parser, algebra)]
    while parser.peek().kind == "PLUS":
        parser.advance()
        parts.append(_parse_spec_atom(parser, algebra))
    tok = parser.peek()
    if tok.kind != "EOF":
        raise UnknownForm(f"{tok.line}:{tok.col}: trailing input {tok.text!r} in module spec")
    return ModuleSpec(tuple(parts))


def _parse_spec_atom(parser: _Parser, algebra) -> tuple:
    tok = parser.peek()
    if tok.kind != "IDENT":
        raise UnknownForm(f"{tok.line}:{tok.col}: expected P(i), S(i), A, or rand(seed, budget)")
    if tok.text == "A":
        parser.advance()
        return ("A",)
    if tok.text in ("P", "S"):
        parser.advance()
        parser.expect("LPAREN", "'('")
        vertex, vtok = parser.expect_int("a vertex id")
        parser.expect("RPAREN", "')'")
        if not 1 <= vertex <= algebra.quiver.n:
            raise VertexOutOfRange(
                f"{vtok.line}:{vtok.col}: vertex {vertex} outside 1..{algebra.quiver.n}"
            )
        return (tok.text, vertex)
    if tok.text == "rand":
        parser.advance()
        parser.expect("LPAREN", "'('")
        seed, _ = parser.expect_int("a seed")
        parser.expect("COMMA", "','")
        budget, _ = parser.expect_int("a size budget")
        parser.expect("RPAREN", "')'")
        return ("rand", seed, budget)
    raise UnknownForm(f"{tok.line}:{tok.col}: unknown module form {tok.text!r}")


# -- report serialization -------------------------------------------------------


def emit_report(report, fmt: str = "text") -> bytes:
    """Serialize a report dataclass (or plain dict) for the CLI.

    JSON output is stable: keys sorted, two-space indent, trailing newline.
    """
    if fmt == "json":
        payload = report.to_json_dict() if hasattr(report, "to_json_dict") else report
        return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt == "text":
        if hasattr(report, "to_text"):
            return report.to_text().encode("utf-8")
        lines = [f"{k} = {v}" for k, v in sorted(report.items())]
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")

"""Reading and writing structure files.

A structure file is line oriented, UTF-8, with ``#`` comments::

    structure monoidal
    symbol ot 2 infix          # signature
    symbol I 0
    generators open            # or: generators A B C
    assoc-unit ot I            # object theory
    rule alpha: ((x ot y) ot z) -> (x ot (y ot z))
    axiom pentagon: m1 = m2
    axiom unit [identity]: lam(1_I) = 1_I

Rule sides are patterns: identifiers that are neither symbols nor declared
generators are variables.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .rewriting import (
    Axiom, Rule, TwoStructure, format_morphism, parse_morphism_tokens,
)
from .terms import (
    ObjectTheory, Signature, TermSyntaxError, TokenStream, format_term,
    parse_term_tokens, tokenize,
)


class StructureFileError(TermSyntaxError):
    pass


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def loads(text: str) -> TwoStructure:
    name = "structure"
    symbols: dict = {}
    infix: set = set()
    generators: set | None = None
    assoc: list = []
    rule_lines: list = []
    axiom_lines: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        head, _, rest = line.partition(" ")
        words = rest.split()
        if head == "structure":
            name = rest.strip() or name
        elif head == "symbol":
            if len(words) not in (2, 3) or not words[1].isdigit():
                raise StructureFileError("expected 'symbol NAME ARITY [infix]'", lineno, 1)
            symbols[words[0]] = int(words[1])
            if len(words) == 3:
                if words[2] != "infix":
                    raise StructureFileError(f"unknown flag {words[2]!r}", lineno, 1)
                infix.add(words[0])
        elif head == "generators":
            if words == ["open"]:
                generators = None
            else:
                generators = (generators or set()) | set(words)
        elif head == "assoc-unit":
            if len(words) != 2:
                raise StructureFileError("expected 'assoc-unit SYMBOL UNIT'", lineno, 1)
            assoc.append((words[0], words[1]))
        elif head == "rule":
            rule_lines.append((lineno, rest))
        elif head == "axiom":
            axiom_lines.append((lineno, rest))
        else:
            raise StructureFileError(f"unknown directive {head!r}", lineno, 1)
    sig = Signature(symbols, frozenset(infix),
                    None if generators is None else frozenset(generators))
    theory = ObjectTheory(tuple(assoc))
    theory.check(sig)
    rules = [_parse_rule(text, lineno, sig) for lineno, text in rule_lines]
    s = TwoStructure(sig, theory, tuple(rules), (), name)
    axioms = [_parse_axiom(text, lineno, s) for lineno, text in axiom_lines]
    return TwoStructure(sig, theory, tuple(rules), tuple(axioms), name)


def _stream(text: str, lineno: int) -> TokenStream:
    try:
        toks = tokenize(text)
    except TermSyntaxError as exc:
        raise StructureFileError(str(exc).rsplit(" (line", 1)[0], lineno, exc.col) from None
    return TokenStream([t._replace(line=lineno) for t in toks])


def _parse_rule(text: str, lineno: int, sig: Signature) -> Rule:
    ts = _stream(text, lineno)
    label = ts.next()
    if label.kind != "ident":
        raise ts.error("expected a rule label", label)
    ts.expect(":")
    lhs = parse_term_tokens(ts, sig, pattern=True)
    ts.expect("->")
    rhs = parse_term_tokens(ts, sig, pattern=True)
    if ts.peek().kind != "end":
        raise ts.error(f"unexpected trailing input {ts.peek().text!r}")
    return Rule(label.text, lhs, rhs)


def _parse_axiom(text: str, lineno: int, s: TwoStructure) -> Axiom:
    head, colon, body = text.partition(":")
    if not colon:
        raise StructureFileError("expected 'axiom NAME [identity]: m = m'", lineno, 1)
    words = head.replace("[", " [ ").replace("]", " ] ").split()
    identity = False
    if words[1:] == ["[", "identity", "]"]:
        identity = True
    elif len(words) != 1:
        raise StructureFileError(f"bad axiom header {head.strip()!r}", lineno, 1)
    if not words:
        raise StructureFileError("expected an axiom name", lineno, 1)
    ts = _stream(body, lineno)
    lhs = parse_morphism_tokens(ts, s, pattern=True)
    ts.expect("=")
    rhs = parse_morphism_tokens(ts, s, pattern=True)
    if ts.peek().kind != "end":
        raise ts.error(f"unexpected trailing input {ts.peek().text!r}")
    return Axiom(words[0], lhs, rhs, identity)


def dumps(s: TwoStructure) -> str:
    lines = [f"structure {s.name}"]
    for sym, ar in s.sig.symbols.items():
        lines.append(f"symbol {sym} {ar}" + (" infix" if sym in s.sig.infix else ""))
    if s.sig.generators is None:
        lines.append("generators open")
    else:
        lines.append("generators " + " ".join(sorted(s.sig.generators)))
    for sym, unit in s.theory.assoc_unit:
        lines.append(f"assoc-unit {sym} {unit}")
    for r in s.rules:
        lines.append(f"rule {r.label}: {format_term(r.lhs, s.sig)} -> {format_term(r.rhs, s.sig)}")
    for ax in s.axioms:
        flag = " [identity]" if ax.identity_instance else ""
        lines.append(f"axiom {ax.name}{flag}: {format_morphism(ax.lhs, s.sig)}"
                     f" = {format_morphism(ax.rhs, s.sig)}")
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> TwoStructure:
    return loads(Path(path).read_text(encoding="utf-8"))


def corpus_names() -> list:
    root = resources.files("twocells") / "corpus"
    return sorted(p.name[:-len(".struct")] for p in root.iterdir()
                  if p.name.endswith(".struct"))


def load_corpus(name: str) -> TwoStructure:
    """Load a bundled structure by name (``ex-nested``) or file name."""
    if not name.endswith(".struct"):
        name += ".struct"
    text = (resources.files("twocells") / "corpus" / name).read_text(encoding="utf-8")
    return loads(text)


def resolve(spec: str) -> TwoStructure:
    """A path to a structure file, or the name of a bundled one."""
    p = Path(spec)
    if p.exists():
        return load(p)
    return load_corpus(spec)

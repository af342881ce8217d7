"""Best-effort structural parser for Java compilation units.

Only declarations are parsed properly: packages, imports, type headers,
fields, methods and constructors. Method bodies are scanned at token level,
which is enough for cyclomatic complexity, invoked names, field accesses and
referenced types. Anything unrecognised is skipped, never fatal.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

logger = logging.getLogger(__name__)

KEYWORDS = frozenset("""
abstract assert boolean break byte case catch char class const continue default do
double else enum extends final finally float for goto if implements import instanceof
int interface long native new package private protected public return short static
strictfp super switch synchronized this throw throws transient try void volatile while
true false null
""".split())
PRIMITIVES = frozenset("boolean byte char short int long float double void var".split())
MODIFIERS = frozenset("""
public private protected static final abstract native synchronized transient volatile
strictfp default sealed
""".split())
TYPE_KEYWORDS = frozenset({"class", "interface", "enum"})
BRANCH_KEYWORDS = frozenset({"if", "for", "while", "case", "catch"})
# Identifiers followed by "(" that are not method invocations.
_NOT_CALLS = KEYWORDS | {"yield"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<lcomment>//[^\n]*)
  | (?P<bcomment>/\*.*?(?:\*/|\Z))
  | (?P<textblock>\"\"\"(?:\\.|.)*?(?:\"\"\"|\Z))
  | (?P<str>"(?:\\.|[^"\\\n])*"?)
  | (?P<char>'(?:\\.|[^'\\\n])*'?)
  | (?P<num>\.?\d(?:[\w.]|[eEpP][+-])*)
  | (?P<id>[^\W\d][\w$]*|\$[\w$]*)
  | (?P<op>\.\.\.|->|::|\+\+|--|&&|\|\||==|!=|<=|\+=|-=|\*=|/=|&=|\|=|\^=|%=|<<=|<<|[^\s\w])
    """,
    re.VERBOSE | re.DOTALL,
)


class Token(NamedTuple):
    kind: str
    text: str
    line: int


def tokenize(source: str) -> list[Token]:
    """Split Java source into tokens, dropping whitespace and comments.

    ``>`` is always emitted on its own so nested generics close cleanly.
    """
    tokens = []
    line = 1
    for m in _TOKEN_RE.finditer(source):
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "lcomment", "bcomment"):
            if kind in ("textblock", "char"):
                kind = "str"
            tokens.append(Token(kind, text, line))
        line += text.count("\n")
    return tokens


@dataclass
class FieldSummary:
    name: str
    type_name: str


@dataclass
class MethodSummary:
    name: str
    parameter_types: list[str]
    return_type: str
    cyclomatic_complexity: int = 1
    invoked_names: list[tuple[str, str]] = field(default_factory=list)
    accessed_fields: list[str] = field(default_factory=list)
    referenced_types: list[str] = field(default_factory=list)
    is_constructor: bool = False

    @property
    def arity(self) -> int:
        return len(self.parameter_types)


@dataclass
class ClassSummary:
    """One type declaration.

    ``superclass_fqn`` and ``interface_fqns`` hold the names as written in
    source; resolution to universe classes happens in :mod:`analysis`.
    """

    fqn: str
    package: str
    name: str
    kind: str = "class"
    superclass_fqn: Optional[str] = None
    interface_fqns: list[str] = field(default_factory=list)
    methods: list[MethodSummary] = field(default_factory=list)
    fields: list[FieldSummary] = field(default_factory=list)
    imports: list[str] = field(default_factory=list)
    type_params: list[str] = field(default_factory=list)
    initializer_types: list[str] = field(default_factory=list)
    outer_fqn: Optional[str] = None
    path: str = ""
    loc: int = 1

    @property
    def field_types(self) -> list[str]:
        return [f.type_name for f in self.fields]

    @property
    def field_names(self) -> list[str]:
        return [f.name for f in self.fields]


def type_names(type_text: str) -> list[str]:
    """Class names referenced by a type expression, e.g. ``Map<K, List<V>>``."""
    out = []
    for name in re.findall(r"[^\W\d][\w$]*(?:\s*\.\s*[^\W\d][\w$]*)*", type_text):
        name = re.sub(r"\s+", "", name)
        if name in PRIMITIVES or name in ("extends", "super"):
            continue
        out.append(name)
    return out


def base_type(type_text: str) -> str:
    """Strip generic arguments and array dimensions: ``a.B<C>[]`` -> ``a.B``."""
    depth = 0
    out = []
    for ch in type_text:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif depth == 0 and ch not in "[] ":
            out.append(ch)
    return "".join(out).rstrip(".")


class _Parser:
    def __init__(self, tokens: list[Token], path: str):
        self.toks = tokens
        self.pos = 0
        self.path = path
        self.package = ""
        self.imports: list[str] = []
        self.classes: list[ClassSummary] = []

    # -- token helpers -------------------------------------------------
    def peek(self, offset: int = 0) -> Optional[str]:
        i = self.pos + offset
        return self.toks[i].text if i < len(self.toks) else None

    def kind(self, offset: int = 0) -> Optional[str]:
        i = self.pos + offset
        return self.toks[i].kind if i < len(self.toks) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.toks)

    def skip_balanced(self, open_: str, close: str) -> int:
        """Skip from an opening token to just past its partner; return inner start."""
        assert self.peek() == open_
        start = self.pos + 1
        depth = 0
        while not self.at_end():
            t = self.peek()
            if t == open_:
                depth += 1
            elif t == close:
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return start
            self.pos += 1
        return start

    def skip_angles(self) -> list[Token]:
        """Skip a generic argument list ``<...>`` and return its inner tokens."""
        start = self.pos + 1
        depth = 0
        while not self.at_end():
            t = self.peek()
            if t == "<":
                depth += 1
            elif t == ">":
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return self.toks[start:self.pos - 1]
            elif t in (";", "{", "}", "(", ")", "="):
                break
            self.pos += 1
        return self.toks[start:self.pos]

    def skip_annotation(self) -> None:
        self.pos += 1  # '@'
        if self.kind() == "id":
            self.pos += 1
        while self.peek() == "." and self.kind(1) == "id":
            self.pos += 2
        if self.peek() == "(":
            self.skip_balanced("(", ")")

    def skip_statement(self) -> None:
        """Skip to past the next ';' or balanced '{...}' at depth 0."""
        while not self.at_end():
            t = self.peek()
            if t == ";":
                self.pos += 1
                return
            if t == "{":
                self.skip_balanced("{", "}")
                return
            if t == "}":
                return
            if t == "(":
                self.skip_balanced("(", ")")
                continue
            self.pos += 1

    def qualified_name(self) -> str:
        parts = []
        while self.kind() == "id" or self.peek() in (".", "*"):
            parts.append(self.peek())
            self.pos += 1
        return "".join(parts)

    def skip_modifiers(self) -> None:
        while not self.at_end():
            t = self.peek()
            if t == "@" and self.peek(1) != "interface":
                self.skip_annotation()
            elif t in MODIFIERS:
                self.pos += 1
            elif t == "non" and self.peek(1) == "-" and self.peek(2) == "sealed":
                self.pos += 3
            else:
                return

    def type_decl_ahead(self) -> Optional[str]:
        t = self.peek()
        if t in TYPE_KEYWORDS:
            return t
        if t == "@" and self.peek(1) == "interface":
            return "annotation"
        if t == "record" and self.kind(1) == "id" and self.peek(2) in ("(", "<"):
            return "record"
        return None

    def parse_type_ref(self) -> Optional[str]:
        """Parse a type like ``final @A java.util.Map<K, V>[]`` and return its text."""
        while self.peek() == "@" or self.peek() == "final":
            if self.peek() == "@":
                self.skip_annotation()
            else:
                self.pos += 1
        if self.kind() != "id" or (self.peek() in KEYWORDS and self.peek() not in PRIMITIVES):
            return None
        parts = [self.peek()]
        self.pos += 1
        while True:
            t = self.peek()
            if t == "<":
                inner = self.skip_angles()
                parts.append("<" + "".join(
                    tok.text + (" " if tok.text in ("extends", "super") else "") for tok in inner
                ) + ">")
            elif t == "." and self.kind(1) == "id":
                parts.append(".")
                parts.append(self.peek(1))
                self.pos += 2
            elif t == "." and self.peek(1) == "@":
                self.pos += 1
                self.skip_annotation()
            elif t == "[" and self.peek(1) == "]":
                parts.append("[]")
                self.pos += 2
            elif t == "...":
                parts.append("[]")
                self.pos += 1
            else:
                break
        return "".join(parts)

    def parse_type_list(self, stop: tuple[str, ...]) -> list[str]:
        out = []
        while not self.at_end() and self.peek() not in stop:
            ref = self.parse_type_ref()
            if ref is None:
                self.pos += 1
                continue
            out.append(ref)
            if self.peek() == ",":
                self.pos += 1
        return out

    # -- compilation unit ----------------------------------------------
    def parse(self) -> list[ClassSummary]:
        while not self.at_end():
            t = self.peek()
            if t == "package":
                self.pos += 1
                self.package = self.qualified_name()
                if self.peek() == ";":
                    self.pos += 1
            elif t == "import":
                self.pos += 1
                static = self.peek() == "static"
                if static:
                    self.pos += 1
                name = self.qualified_name()
                self.imports.append(("static " if static else "") + name)
                if self.peek() == ";":
                    self.pos += 1
            else:
                start = self.pos
                self.skip_modifiers()
                kind = self.type_decl_ahead()
                if kind:
                    self.parse_type(kind, None, start)
                elif self.pos == start:
                    self.pos += 1
        return self.classes

    def parse_type(self, kind: str, outer: Optional[ClassSummary], start: int) -> None:
        self.pos += 2 if kind == "annotation" else 1
        if self.kind() != "id":
            return
        name = self.peek()
        self.pos += 1
        if outer is not None:
            fqn = f"{outer.fqn}.{name}"
        else:
            fqn = f"{self.package}.{name}" if self.package else name
        cls = ClassSummary(
            fqn=fqn, package=self.package, name=name, kind=kind,
            imports=list(self.imports), path=self.path,
            outer_fqn=outer.fqn if outer else None,
        )
        if outer is not None:
            cls.type_params = list(outer.type_params)
        self.classes.append(cls)
        if self.peek() == "<":
            cls.type_params += _type_param_names(self.skip_angles())
        if kind == "record" and self.peek() == "(":
            inner_start = self.skip_balanced("(", ")")
            for ptype, pname in _split_params(self.toks[inner_start:self.pos - 1]):
                cls.fields.append(FieldSummary(pname, ptype))
        while not self.at_end() and self.peek() != "{":
            t = self.peek()
            self.pos += 1
            if t == "extends":
                types = self.parse_type_list(("implements", "permits", "{"))
                if kind == "interface":
                    cls.interface_fqns += types
                elif types:
                    cls.superclass_fqn = types[0]
            elif t == "implements":
                cls.interface_fqns += self.parse_type_list(("extends", "permits", "{"))
            elif t == "permits":
                self.parse_type_list(("extends", "implements", "{"))
            elif t in (";", "}"):
                return
        if self.at_end():
            return
        self.parse_body(cls)
        end = min(self.pos, len(self.toks)) - 1
        cls.loc = max(1, len({tok.line for tok in self.toks[start:end + 1]}))

    def parse_body(self, cls: ClassSummary) -> None:
        self.pos += 1  # '{'
        if cls.kind == "enum":
            self.parse_enum_constants(cls)
        while not self.at_end():
            t = self.peek()
            if t == "}":
                self.pos += 1
                return
            if t == ";":
                self.pos += 1
                continue
            if t == "{":
                self.skip_balanced("{", "}")
                continue
            if t == "static" and self.peek(1) == "{":
                self.pos += 1
                self.skip_balanced("{", "}")
                continue
            member_start = self.pos
            self.skip_modifiers()
            kind = self.type_decl_ahead()
            if kind:
                self.parse_type(kind, cls, member_start)
                continue
            if not self.parse_member(cls):
                if self.pos == member_start:
                    self.pos += 1
                self.skip_statement()

    def parse_enum_constants(self, cls: ClassSummary) -> None:
        while not self.at_end():
            while self.peek() == "@":
                self.skip_annotation()
            if self.kind() == "id" and self.peek(1) in ("(", ",", ";", "{", "}"):
                cls.fields.append(FieldSummary(self.peek(), cls.name))
                self.pos += 1
                if self.peek() == "(":
                    self.skip_balanced("(", ")")
                if self.peek() == "{":
                    self.skip_balanced("{", "}")
                if self.peek() == ",":
                    self.pos += 1
                    continue
            if self.peek() == ";":
                self.pos += 1
            return

    def parse_member(self, cls: ClassSummary) -> bool:
        method_tparams: list[str] = []
        if self.peek() == "<":
            method_tparams = _type_param_names(self.skip_angles())
            self.skip_modifiers()
        if self.peek() == cls.name and self.peek(1) == "(":
            name = self.peek()
            self.pos += 1
            return self.parse_method(cls, name, "", method_tparams, constructor=True)
        if cls.kind == "record" and self.peek() == cls.name and self.peek(1) == "{":
            # compact canonical constructor
            self.pos += 1
            body_start = self.skip_balanced("{", "}")
            m = MethodSummary(name=cls.name, parameter_types=list(cls.field_types),
                              return_type="", is_constructor=True)
            _analyze_body(self.toks[body_start:self.pos - 1], cls, m, {}, method_tparams)
            cls.methods.append(m)
            return True
        type_ref = self.parse_type_ref()
        if type_ref is None or self.kind() != "id":
            return False
        name = self.peek()
        self.pos += 1
        if self.peek() == "(":
            return self.parse_method(cls, name, type_ref, method_tparams)
        return self.parse_fields(cls, type_ref, name)

    def parse_method(self, cls, name, return_type, tparams, constructor=False) -> bool:
        inner_start = self.skip_balanced("(", ")")
        params = _split_params(self.toks[inner_start:self.pos - 1])
        while self.peek() == "[":
            self.pos += 2
            return_type += "[]"
        if self.peek() == "throws":
            self.pos += 1
            self.parse_type_list(("{", ";"))
        m = MethodSummary(
            name=name,
            parameter_types=[p[0] for p in params],
            return_type=return_type,
            is_constructor=constructor,
        )
        cls.methods.append(m)
        if self.peek() == "default":
            self.skip_statement()
        elif self.peek() == "{":
            body_start = self.skip_balanced("{", "}")
            local_types = {pname: ptype for ptype, pname in params}
            _analyze_body(self.toks[body_start:self.pos - 1], cls, m, local_types, tparams)
        elif self.peek() == ";":
            self.pos += 1
        return True

    def parse_fields(self, cls: ClassSummary, type_ref: str, first_name: str) -> bool:
        names = [first_name]
        dims = ""
        while self.peek() == "[":
            self.pos += 2
            dims += "[]"
        init_start = None
        init_tokens: list[Token] = []
        while not self.at_end():
            t = self.peek()
            if t == ";":
                self.pos += 1
                break
            if t == "}":
                break
            if t == "=":
                self.pos += 1
                init_start = self.pos
                continue
            if t in ("(", "{", "["):
                self.skip_balanced(t, {"(": ")", "{": "}", "[": "]"}[t])
                continue
            if t == ",":
                if init_start is not None:
                    init_tokens += self.toks[init_start:self.pos]
                    init_start = None
                self.pos += 1
                if self.kind() == "id":
                    names.append(self.peek())
                    self.pos += 1
                continue
            self.pos += 1
        if init_start is not None:
            end = self.pos - 1 if self.pos > 0 and self.toks[self.pos - 1].text == ";" else self.pos
            init_tokens += self.toks[init_start:end]
        for n in names:
            cls.fields.append(FieldSummary(n, type_ref + dims))
        if init_tokens:
            scratch = MethodSummary(name="<field-init>", parameter_types=[], return_type="")
            _analyze_body(init_tokens, cls, scratch, {}, [])
            cls.initializer_types += scratch.referenced_types
        return True


def _type_param_names(inner: list[Token]) -> list[str]:
    names = []
    depth = 0
    expect = True
    for tok in inner:
        if tok.text == "<":
            depth += 1
        elif tok.text == ">":
            depth -= 1
        elif tok.text == "," and depth == 0:
            expect = True
        elif expect and tok.kind == "id" and depth == 0:
            names.append(tok.text)
            expect = False
    return names


def _split_params(toks: list[Token]) -> list[tuple[str, str]]:
    """Split a parameter list into ``(type, name)`` pairs."""
    groups: list[list[Token]] = [[]]
    depth = 0
    for tok in toks:
        if tok.text in ("<", "(", "["):
            depth += 1
        elif tok.text in (">", ")", "]"):
            depth -= 1
        if tok.text == "," and depth == 0:
            groups.append([])
        else:
            groups[-1].append(tok)
    params = []
    for g in groups:
        sub = _Parser(g, "")
        ptype = sub.parse_type_ref()
        if ptype is None or sub.kind() != "id":
            continue
        pname = sub.peek()
        if pname == "this":
            continue
        sub.pos += 1
        while sub.peek() == "[":
            ptype += "[]"
            sub.pos += 2
        params.append((ptype, pname))
    return params


_DECL_PRECEDERS = frozenset({None, "{", "}", ";", "(", ",", "final", ":", "->"})
_GENERIC_OK = frozenset({",", "?", "extends", "super", "&", "[", "]", ".", "<", ">", "@"})


def _scan_local_type(toks: list[Token], i: int) -> Optional[tuple[str, int]]:
    """If a local declaration type starts at ``i``, return (type, index of name)."""
    n = len(toks)
    if toks[i].kind != "id" or (toks[i].text in KEYWORDS and toks[i].text not in PRIMITIVES):
        return None
    parts = [toks[i].text]
    j = i + 1
    while j < n:
        t = toks[j].text
        if t == "." and j + 1 < n and toks[j + 1].kind == "id":
            parts += [".", toks[j + 1].text]
            j += 2
        elif t == "<":
            depth = 0
            k = j
            while k < n:
                tk = toks[k]
                if tk.text == "<":
                    depth += 1
                elif tk.text == ">":
                    depth -= 1
                    if depth == 0:
                        break
                elif tk.kind != "id" and tk.text not in _GENERIC_OK:
                    return None
                k += 1
            if k >= n:
                return None
            parts.append("".join(tok.text for tok in toks[j:k + 1]))
            j = k + 1
        elif t == "[" and j + 1 < n and toks[j + 1].text == "]":
            parts.append("[]")
            j += 2
        else:
            break
    if j < n and toks[j].kind == "id" and toks[j].text not in KEYWORDS:
        if j + 1 < n and toks[j + 1].text in ("=", ";", ":", ",", ")"):
            return "".join(parts), j
    return None


def _analyze_body(toks: list[Token], cls: ClassSummary, m: MethodSummary,
                  local_types: dict[str, str], tparams: list[str]) -> None:
    """Fill complexity, invocations, field accesses and referenced types of ``m``."""
    field_types = {f.name: f.type_name for f in cls.fields}
    locals_ = dict(local_types)
    skip_types = set(tparams) | set(cls.type_params)
    cc = 1
    accessed: list[str] = []
    refs: list[str] = []

    def add_ref(type_text: str) -> None:
        for name in type_names(type_text):
            if name.split(".")[0] not in skip_types:
                refs.append(name)

    n = len(toks)
    skip_upto = 0
    for i, tok in enumerate(toks):
        text = tok.text
        prev = toks[i - 1].text if i > 0 else None
        nxt = toks[i + 1].text if i + 1 < n else None
        if text in BRANCH_KEYWORDS and tok.kind == "id":
            cc += 1
        elif text in ("&&", "||"):
            cc += 1
        elif text == "?":
            if not (prev in ("<", ",") and nxt in (">", ",", "extends", "super")):
                cc += 1
        if tok.kind != "id" or i < skip_upto:
            continue
        # local variable declarations
        if prev in _DECL_PRECEDERS and text != "yield":
            decl = _scan_local_type(toks, i)
            if decl is not None:
                dtype, name_idx = decl
                if dtype == "var":
                    k = name_idx + 2
                    if k + 1 < n and toks[k].text == "new":
                        dtype = toks[k + 1].text
                locals_[toks[name_idx].text] = dtype
                if dtype not in PRIMITIVES:
                    add_ref(dtype)
        if text == "new":
            k = i + 1
            while k < n and toks[k].text == "@":
                k += 2
            parts = []
            while k < n and (toks[k].kind == "id" or toks[k].text == "."):
                parts.append(toks[k].text)
                k += 1
            created = "".join(parts)
            if created and created not in PRIMITIVES:
                add_ref(created)
                if k < n and toks[k].text == "<":
                    depth = 0
                    while k < n:
                        if toks[k].text == "<":
                            depth += 1
                        elif toks[k].text == ">":
                            depth -= 1
                            if depth == 0:
                                k += 1
                                break
                        k += 1
                if k < n and toks[k].text == "(":
                    m.invoked_names.append((created, "<init>"))
            skip_upto = k
            continue
        if text == "instanceof" and nxt is not None:
            if toks[i + 1].kind == "id" and nxt not in KEYWORDS:
                add_ref(nxt)
            continue
        if nxt == "::" and text[:1].isupper() and prev != ".":
            add_ref(text)
            continue
        if nxt == "." and i + 2 < n and toks[i + 2].text == "class" and prev != ".":
            add_ref(text)
            continue
        # casts: ( Type ) operand
        if prev == "(" and text[:1].isupper() and text not in locals_:
            decl_end = i + 1
            while decl_end + 1 < n and toks[decl_end].text == "." and toks[decl_end + 1].kind == "id":
                decl_end += 2
            if decl_end < n and toks[decl_end].text == ")" and decl_end + 1 < n:
                after = toks[decl_end + 1]
                if after.kind in ("id", "num", "str") or after.text == "(":
                    if after.text not in ("instanceof",):
                        add_ref("".join(t.text for t in toks[i:decl_end]))
        if nxt == "(" and text not in _NOT_CALLS:
            if prev == ".":
                receiver = _receiver_type(toks, i - 1, cls, field_types, locals_)
                if receiver and receiver[:1].isupper() and receiver not in locals_ \
                        and _is_static_chain(toks, i - 1, locals_, field_types):
                    add_ref(receiver)
            elif prev == "::":
                continue
            else:
                receiver = cls.name
            m.invoked_names.append((receiver or "?", text))
            continue
        if text in field_types:
            if prev == "." and i >= 2 and toks[i - 2].text == "this":
                accessed.append(text)
            elif prev != "." and text not in locals_ and nxt != "(":
                accessed.append(text)
    m.cyclomatic_complexity = cc
    m.accessed_fields = list(dict.fromkeys(accessed))
    m.referenced_types = refs


def _dotted_chain(toks: list[Token], dot_idx: int) -> list[str]:
    """Identifiers of ``a.b.c`` ending just before the '.' at ``dot_idx``.

    Empty when the chain hangs off a call or index expression.
    """
    chain = []
    j = dot_idx - 1
    while j >= 0 and toks[j].kind == "id":
        chain.append(toks[j].text)
        if j >= 1 and toks[j - 1].text == ".":
            if j >= 2 and toks[j - 2].kind == "id":
                j -= 2
                continue
            return []
        break
    return list(reversed(chain))


def _is_static_chain(toks, dot_idx, locals_, field_types) -> bool:
    chain = _dotted_chain(toks, dot_idx)
    return bool(chain) and chain[0] not in locals_ and chain[0] not in field_types \
        and chain[0] not in ("this", "super")


def _receiver_type(toks, dot_idx, cls, field_types, locals_) -> Optional[str]:
    if dot_idx == 0 or toks[dot_idx - 1].kind != "id":
        return None
    chain = _dotted_chain(toks, dot_idx)
    if not chain:
        return None
    head = chain[0]
    if head == "this":
        if len(chain) == 1:
            return cls.name
        if len(chain) == 2 and chain[1] in field_types:
            return base_type(field_types[chain[1]])
        return None
    if head == "super" and len(chain) == 1:
        return base_type(cls.superclass_fqn) if cls.superclass_fqn else None
    if head in locals_:
        return base_type(locals_[head]) if len(chain) == 1 else None
    if head in field_types:
        return base_type(field_types[head]) if len(chain) == 1 else None
    if chain[-1][:1].isupper():
        return ".".join(chain)
    return None


def parse_compilation_unit(source_text, path: str = "") -> list[ClassSummary]:
    """Parse one source file into class summaries (nested types included).

    ``source_text`` may be ``bytes``; undecodable input is skipped with a
    warning and yields no classes.
    """
    if isinstance(source_text, bytes):
        try:
            source_text = source_text.decode("utf-8")
        except UnicodeDecodeError:
            logger.warning("skipping undecodable file %s", path)
            return []
    if source_text.startswith("﻿"):
        source_text = source_text[1:]
    return _Parser(tokenize(source_text), path).parse()

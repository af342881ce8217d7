from __future__ import annotations

import logging

import pytest

from refactor_effort.javaparse import base_type, parse_compilation_unit, tokenize, type_names


def _one(src: str):
    [cls] = parse_compilation_unit(src, "X.java")
    return cls


def _method(src: str, name: str):
    return next(m for m in _one(src).methods if m.name == name)


def test_empty_file_has_no_classes():
    assert parse_compilation_unit("", "Empty.java") == []


def test_comments_and_strings_are_not_tokens():
    toks = [t.text for t in tokenize('// if while\n/* class X {} */ a = "for (;;)"; c = \'?\';')]
    assert "if" not in toks and "class" not in toks and "for" not in toks
    assert toks[0] == "a" and '"for (;;)"' in toks


def test_class_with_two_methods():
    cls = _one("package p;\nclass A {\n void f() {}\n int g(String s) { return 1; }\n}\n")
    assert (cls.fqn, cls.package, cls.name, cls.kind) == ("p.A", "p", "A", "class")
    assert [(m.name, m.arity) for m in cls.methods] == [("f", 0), ("g", 1)]
    assert cls.methods[1].parameter_types == ["String"]
    assert cls.methods[1].return_type == "int"


def test_nested_class_is_its_own_summary():
    out = parse_compilation_unit("package p;\nclass A {\n static class B { void h() {} }\n}\n", "A.java")
    assert [c.fqn for c in out] == ["p.A", "p.A.B"]
    assert out[1].outer_fqn == "p.A"
    assert out[0].methods == []


def test_default_package():
    assert _one("class Lone {}").fqn == "Lone"


def test_annotations_generics_and_throws():
    cls = _one("""
        package p;
        import java.util.List;
        @Deprecated
        public final class Box<T extends Comparable<T>> extends Base<T> implements Iterable<T>, java.io.Serializable {
            @SuppressWarnings("unchecked")
            private final List<Map<String, T>> items = new ArrayList<>();
            public <R> List<R> map(java.util.function.Function<? super T, R> fn) throws IOException { return null; }
        }
    """)
    assert cls.fqn == "p.Box"
    assert cls.type_params == ["T"]
    assert cls.superclass_fqn == "Base<T>"
    assert cls.interface_fqns == ["Iterable<T>", "java.io.Serializable"]
    assert cls.imports == ["java.util.List"]
    assert cls.fields[0].name == "items"
    assert [m.name for m in cls.methods] == ["map"]
    assert cls.methods[0].arity == 1


def test_interface_enum_and_record_kinds():
    out = parse_compilation_unit("""
        package p;
        interface I { int size(); default boolean empty() { return size() == 0; } }
        enum Color { RED, GREEN; int code() { return ordinal(); } }
        record Point(int x, int y) { Point { if (x < 0) throw new IllegalArgumentException(); } }
        @interface Marker { String value() default ""; }
    """, "p/Kinds.java")
    kinds = {c.name: c.kind for c in out}
    assert kinds == {"I": "interface", "Color": "enum", "Point": "record", "Marker": "annotation"}
    by = {c.name: c for c in out}
    assert by["Color"].field_names == ["RED", "GREEN"]
    assert by["Point"].field_names == ["x", "y"]
    assert [m.name for m in by["I"].methods] == ["size", "empty"]


def test_multiple_fields_in_one_declaration():
    cls = _one("class A { int a, b = 2, c[]; String s; }")
    assert cls.field_names == ["a", "b", "c", "s"]


@pytest.mark.parametrize("body, expected", [
    ("", 1),
    ("if (a) { x(); } else if (b) { y(); }", 3),
    ("for (int i = 0; i < n; i++) { while (ok) {} }", 3),
    ("switch (k) { case 1: break; case 2: break; default: }", 3),
    ("try { f(); } catch (IOException e) {} catch (RuntimeException e) {}", 3),
    ("return a && b || c;", 3),
    ("return a ? 1 : 2;", 2),
    ("java.util.List<?> xs = null; return 0;", 1),
    ('String s = "if (a && b)"; return 0;', 1),
    ("do { n--; } while (n > 0);", 2),
])
def test_cyclomatic_complexity(body, expected):
    assert _method(f"class A {{ int f() {{ {body} }} }}", "f").cyclomatic_complexity == expected


def test_abstract_method_complexity_is_one():
    assert _method("abstract class A { abstract int f(); }", "f").cyclomatic_complexity == 1


def test_lambda_body_counts_toward_enclosing_method():
    m = _method("class A { void f() { run(() -> { if (x) y(); }); } }", "f")
    assert m.cyclomatic_complexity == 2


def test_invocations_and_field_accesses():
    src = """
        class A {
            private B b;
            private int n;
            void f(C c) {
                int n = 3;
                b.go();
                c.stop(n);
                this.n = n;
                helper();
                new D().run();
                E.make();
            }
        }
    """
    m = _method(src, "f")
    assert set(m.invoked_names) == {("B", "go"), ("C", "stop"), ("A", "helper"), ("D", "<init>"),
                                    ("?", "run"), ("E", "make")}
    # the local n shadows the field except through ``this.``
    assert set(m.accessed_fields) == {"b", "n"}
    assert {"D", "E"} <= set(m.referenced_types)
    assert m.parameter_types == ["C"]


def test_local_shadowing_hides_field():
    m = _method("class A { int n; int f() { int n = 1; return n; } }", "f")
    assert m.accessed_fields == []


def test_casts_instanceof_and_class_literals_reference_types():
    m = _method("class A { Object f(Object o) { if (o instanceof B) return (C) o; return D.class; } }", "f")
    assert {"B", "C", "D"} <= set(m.referenced_types)


def test_static_import_is_kept_marked():
    cls = _one("import static java.lang.Math.max;\nimport java.util.*;\nclass A {}")
    assert cls.imports == ["static java.lang.Math.max", "java.util.*"]


def test_undecodable_bytes_warn_and_yield_nothing(caplog):
    with caplog.at_level(logging.WARNING):
        assert parse_compilation_unit(b"class A { \xff\xfe }", "Bad.java") == []
    assert "Bad.java" in caplog.text


def test_truncated_source_does_not_raise():
    out = parse_compilation_unit("package p; class A { void f() { if (x", "A.java")
    assert [c.fqn for c in out] == ["p.A"]


def test_loc_counts_non_blank_declaration_lines():
    cls = _one("package p;\n\n/* doc */\nclass A {\n\n  int x;\n  // note\n  void f() {\n  }\n}\n")
    assert cls.loc == 5


@pytest.mark.parametrize("text, names, base", [
    ("int", [], "int"),
    ("List<Map<String, Foo>>", ["List", "Map", "String", "Foo"], "List"),
    ("java.util.List<? extends Bar>[]", ["java.util.List", "Bar"], "java.util.List"),
    ("Outer.Inner", ["Outer.Inner"], "Outer.Inner"),
])
def test_type_name_helpers(text, names, base):
    assert type_names(text) == names
    assert base_type(text) == base

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ordstat as o
from ordstat import BudgetError, ExprError, RankError, TextParseError
from ordstat.expr import Expr

x1, x2, x3 = o.var(1), o.var(2), o.var(3)

finite = st.floats(min_value=-1e6, max_value=1e6,
                   allow_nan=False, allow_infinity=False)


def min2_arith():
    return o.halve(o.sub(o.add(x1, x2), o.abs_of(o.sub(x1, x2))))


class TestConstruction:
    def test_unknown_kind(self):
        with pytest.raises(ExprError):
            Expr("mul", None, (x1, x2))

    def test_wrong_arity(self):
        with pytest.raises(ExprError):
            Expr("add", None, (x1,))
        with pytest.raises(ExprError):
            Expr("abs", None, (x1, x2))

    def test_var_payload_validation(self):
        with pytest.raises(ExprError):
            o.var(0)
        with pytest.raises(ExprError):
            Expr("var", "x")

    def test_const_must_be_finite(self):
        with pytest.raises(ExprError):
            o.const(float("inf"))
        with pytest.raises(ExprError):
            o.const(float("nan"))

    def test_children_must_be_exprs(self):
        with pytest.raises(ExprError):
            o.add(x1, 3)

    def test_structural_equality_and_hash(self):
        a = o.add(o.var(1), o.var(2))
        b = o.add(o.var(1), o.var(2))
        assert a == b and hash(a) == hash(b)
        assert a != o.add(x2, x1)
        assert a != o.sub(x1, x2)
        assert o.const(2) == o.const(2.0)
        assert o.var(1) != o.const(1.0)


class TestBuildSelection:
    def test_single_variable_either_form(self):
        assert o.build_selection_expr(1, 1, "minmax") == x1
        assert o.build_selection_expr(1, 1, "arithmetic") == x1

    def test_min_of_two_arithmetic_structure(self):
        assert o.build_selection_expr(2, 1, "arithmetic") == min2_arith()

    def test_second_of_three_minmax_structure(self):
        expected = o.max_of(o.max_of(o.min_of(x2, x3), o.min_of(x1, x3)),
                            o.min_of(x1, x2))
        assert o.build_selection_expr(3, 2, "minmax") == expected

    def test_form_kind_discipline(self):
        mm = o.build_selection_expr(4, 2, "minmax")
        assert o.contains_minmax(mm)
        assert o.form_of(mm) == "minmax"
        ar = o.build_selection_expr(4, 2, "arithmetic")
        assert not o.contains_minmax(ar)
        assert o.form_of(ar) == "arithmetic"

    def test_rank_and_form_validation(self):
        with pytest.raises(RankError):
            o.build_selection_expr(3, 4)
        with pytest.raises(RankError):
            o.build_selection_expr(3, 0)
        with pytest.raises(ExprError):
            o.build_selection_expr(3, 2, "polynomial")

    def test_budget_refusals(self):
        with pytest.raises(BudgetError):
            o.build_selection_expr(30, 15)
        # call count is fine for rank 2 of many variables, but the graph
        # itself would be quadratic in the variable count
        with pytest.raises(BudgetError):
            o.build_selection_expr(100_000, 2)

    @pytest.mark.parametrize("n_vars,rank", [(n, r) for n in range(1, 7)
                                             for r in range(1, n + 1)])
    def test_evaluates_to_selection(self, n_vars, rank):
        rng = random.Random(1000 * n_vars + rank)
        fn = o.compile_to_pyfunc(o.build_selection_expr(n_vars, rank, "minmax"))
        for _ in range(25):
            xs = [rng.uniform(-100, 100) for _ in range(n_vars)]
            assert fn(xs) == o.select_naive(rank, xs)


class TestLowering:
    def test_min_pair_shape(self):
        assert o.lower_minmax_to_arith(o.min_of(x1, x2)) == min2_arith()

    def test_max_pair_shape(self):
        expected = o.halve(o.add(o.add(x1, x2), o.abs_of(o.sub(x1, x2))))
        assert o.lower_minmax_to_arith(o.max_of(x1, x2)) == expected

    def test_identity_without_minmax(self):
        assert o.lower_minmax_to_arith(x1) == x1
        e = o.halve(o.abs_of(o.sub(x1, o.const(3))))
        assert o.lower_minmax_to_arith(e) == e

    def test_exact_on_moderate_integers(self):
        rng = random.Random(7)
        mm = o.build_selection_expr(5, 3, "minmax")
        ar = o.lower_minmax_to_arith(mm)
        f_mm, f_ar = o.compile_to_pyfunc(mm), o.compile_to_pyfunc(ar)
        for _ in range(300):
            xs = [float(rng.randint(-2 ** 40, 2 ** 40)) for _ in range(5)]
            assert f_ar(xs) == f_mm(xs)

    @given(st.lists(finite, min_size=4, max_size=4))
    @settings(max_examples=150)
    def test_agrees_within_tolerance_on_floats(self, xs):
        mm = o.build_selection_expr(4, 2, "minmax")
        ar = o.lower_minmax_to_arith(mm)
        scale = max(1.0, max(abs(v) for v in xs))
        diff = abs(o.compile_to_pyfunc(ar)(xs) - o.compile_to_pyfunc(mm)(xs))
        assert diff <= 1e-9 * scale


class TestCse:
    def test_min3_shares_repeated_abs(self):
        root, m = o.cse(o.build_selection_expr(3, 1, "arithmetic"))
        assert m.node_count_dag < m.node_count_tree
        assert (m.node_count_tree, m.node_count_dag) == (25, 13)

    def test_var_unchanged(self):
        root, m = o.cse(x1)
        assert root == x1
        assert m == o.ExprMetrics(1, 1, 1)

    def test_shared_nodes_are_one_object(self):
        # two structurally equal subtrees collapse to one object
        e = o.add(o.sub(x1, x2), o.sub(x1, x2))
        root, m = o.cse(e)
        assert root.children[0] is root.children[1]
        assert m.node_count_tree == 7 and m.node_count_dag == 4

    def test_evaluation_invariant(self):
        rng = random.Random(11)
        e = o.build_selection_expr(5, 2, "arithmetic")
        shared, _ = o.cse(e)
        for _ in range(200):
            assignment = {k: rng.uniform(-50, 50) for k in range(1, 6)}
            assert o.eval_expr(shared, assignment) == o.eval_expr(e, assignment)

    def test_metrics_depth(self):
        assert o.metrics_of(o.add(x1, o.add(x2, x3))).depth == 3
        assert o.metrics_of(x1).depth == 1


class TestEval:
    def test_known_values(self):
        assert o.eval_expr(min2_arith(), {1: 1, 2: 2}) == 1
        assert o.eval_expr(x1, {1: 42}) == 42
        mm = o.build_selection_expr(3, 2, "minmax")
        assert o.eval_expr(mm, {1: 5, 2: 1, 3: 9}) == 5

    def test_const_and_halve(self):
        assert o.eval_expr(o.halve(o.const(3)), {}) == 1.5

    def test_missing_variable(self):
        with pytest.raises(ExprError):
            o.eval_expr(o.add(x1, x2), {1: 1.0})

    def test_non_finite_assignment(self):
        with pytest.raises(ExprError):
            o.eval_expr(x1, {1: float("nan")})

    def test_non_finite_intermediate_reported(self):
        big = o.const(1e308)
        with pytest.raises(ExprError, match="non-finite intermediate"):
            o.eval_expr(o.add(big, big), {})

    def test_sequence_assignment_accepted(self):
        # 1-based lookups also work against 1-based mappings only; a dict
        # is the documented interface, but index-like access must not
        # silently misalign
        assert o.eval_expr(o.add(x1, x2), {1: 3, 2: 4}) == 7


class TestEmitText:
    def test_golden_infix(self):
        assert o.emit_text(o.build_selection_expr(2, 1, "arithmetic")) == \
            "((x1 + x2) - |x1 - x2|)/2"

    def test_golden_sexpr_var(self):
        assert o.emit_text(o.var(3), "sexpr") == "(var 3)"

    def test_minmax_braces(self):
        assert o.emit_text(o.min_of(x1, x2)) == "min{x1, x2}"
        assert o.emit_text(o.max_of(o.min_of(x1, x2), x3)) == "max{min{x1, x2}, x3}"

    def test_abs_keeps_parens_for_non_chain_child(self):
        assert o.emit_text(o.abs_of(x1)) == "|x1|"
        assert o.emit_text(o.abs_of(o.halve(x1))) == "|x1/2|"
        assert o.emit_text(o.abs_of(o.abs_of(o.sub(x1, x2)))) == "||x1 - x2||"

    def test_halve_chains(self):
        assert o.emit_text(o.halve(o.halve(x1))) == "x1/2/2"
        assert o.emit_text(o.halve(o.min_of(x1, x2))) == "min{x1, x2}/2"

    def test_const_rendering(self):
        assert o.emit_text(o.const(5)) == "5"
        assert o.emit_text(o.const(2.5)) == "2.5"
        assert o.emit_text(o.const(-3)) == "-3"

    def test_bad_syntax(self):
        with pytest.raises(ExprError):
            o.emit_text(x1, "latex")

    def test_deterministic(self):
        e = o.build_selection_expr(4, 2, "arithmetic")
        assert o.emit_text(e) == o.emit_text(e)


class TestParseText:
    @pytest.mark.parametrize("n_vars,rank", [(1, 1), (2, 2), (3, 2), (4, 3), (5, 2)])
    @pytest.mark.parametrize("form", ["minmax", "arithmetic"])
    @pytest.mark.parametrize("syntax", ["infix", "sexpr"])
    def test_round_trip_selection_formulas(self, n_vars, rank, form, syntax):
        e = o.build_selection_expr(n_vars, rank, form)
        assert o.parse_text(o.emit_text(e, syntax), syntax) == e

    @pytest.mark.parametrize("syntax", ["infix", "sexpr"])
    def test_round_trip_handcrafted(self, syntax):
        exprs = [
            x1,
            o.const(-2.5),
            o.halve(o.halve(o.abs_of(o.sub(x1, o.const(3))))),
            o.add(o.sub(x1, x2), o.abs_of(o.add(x1, o.min_of(x2, x3)))),
            o.max_of(o.halve(x1), o.abs_of(o.abs_of(o.sub(x1, x2)))),
        ]
        for e in exprs:
            assert o.parse_text(o.emit_text(e, syntax), syntax) == e

    def test_nested_bars_disambiguated(self):
        e = o.abs_of(o.sub(x1, o.abs_of(o.sub(x2, x3))))
        text = o.emit_text(e)
        assert text == "|x1 - |x2 - x3||"
        assert o.parse_text(text) == e

    def test_whitespace_tolerated(self):
        assert o.parse_text("( x1+x2 )") == o.add(x1, x2)

    @pytest.mark.parametrize("bad", [
        "", "x1 +", "min{x1 x2}", "(x1", "x1)", "|x1", "x1/3", "x1//2",
        "min{x1, x2", "1.2.3", "x1 x2", "foo", "(var x)", "x0",
    ])
    def test_infix_rejects(self, bad):
        with pytest.raises((TextParseError, ExprError)):
            o.parse_text(bad)

    @pytest.mark.parametrize("bad", [
        "", "(var)", "(var 1.5)", "(mul (var 1) (var 2))", "(add (var 1))",
        "(var 1) extra", "((var 1))",
    ])
    def test_sexpr_rejects(self, bad):
        with pytest.raises((TextParseError, ExprError)):
            o.parse_text(bad, "sexpr")

    def test_scientific_notation(self):
        assert o.parse_text("1e-05") == o.const(1e-05)
        assert o.parse_text(o.emit_text(o.const(1.5e300))) == o.const(1.5e300)


class TestSlp:
    def test_min2_instruction_sequence(self):
        prog = o.emit_slp(o.build_selection_expr(2, 1, "arithmetic"))
        assert [ins.op for ins in prog.instructions] == \
            ["add", "sub", "abs", "sub", "halve"]
        assert prog.result == ("t", 4)

    def test_leaf_program(self):
        prog = o.emit_slp(x1)
        assert prog.instructions == ()
        assert prog.to_text() == "result x1"

    def test_text_format(self):
        prog = o.emit_slp(o.build_selection_expr(2, 1, "arithmetic"))
        assert prog.to_text() == (
            "t0 = add x1 x2\n"
            "t1 = sub x1 x2\n"
            "t2 = abs t1\n"
            "t3 = sub t0 t2\n"
            "t4 = halve t3\n"
            "result t4"
        )

    def test_single_assignment_in_dependency_order(self):
        prog = o.emit_slp(o.build_selection_expr(5, 3, "arithmetic"))
        seen = set()
        for ins in prog.instructions:
            assert ins.dest not in seen
            for tag, ref in ins.args:
                if tag == "t":
                    assert ref in seen
            seen.add(ins.dest)

    def test_minmax_refused(self):
        with pytest.raises(ExprError):
            o.emit_slp(o.min_of(x1, x2))

    def test_interpret_matches_eval(self):
        rng = random.Random(23)
        e = o.build_selection_expr(5, 2, "arithmetic")
        prog = o.emit_slp(e)
        for _ in range(200):
            xs = {k: rng.uniform(-1000, 1000) for k in range(1, 6)}
            assert o.interpret_slp(prog, xs) == o.eval_expr(e, xs)

    def test_interpret_missing_variable(self):
        prog = o.emit_slp(o.add(x1, x2))
        with pytest.raises(ExprError):
            o.interpret_slp(prog, {1: 1.0})


class TestCompileToPyfunc:
    def test_matches_eval_expr(self):
        rng = random.Random(31)
        for form in ("minmax", "arithmetic"):
            e = o.build_selection_expr(4, 2, form)
            fn = o.compile_to_pyfunc(e)
            for _ in range(100):
                xs = [rng.uniform(-100, 100) for _ in range(4)]
                assignment = {k + 1: v for k, v in enumerate(xs)}
                assert fn(xs) == o.eval_expr(e, assignment)

    def test_constants_embedded(self):
        fn = o.compile_to_pyfunc(o.add(x1, o.const(2.5)))
        assert fn([1.0]) == 3.5


class TestFormatReal:
    @pytest.mark.parametrize("value,text", [
        (5.0, "5"), (-3.0, "-3"), (0.0, "0"), (2.5, "2.5"),
        (1e-05, "1e-05"), (1.5e300, "1.5e+300"), (1 / 3, repr(1 / 3)),
    ])
    def test_formatting(self, value, text):
        assert o.format_real(value) == text

    @given(finite)
    def test_round_trips(self, value):
        assert float(o.format_real(value)) == value

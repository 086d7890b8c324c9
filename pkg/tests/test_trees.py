import random
from importlib import resources

import pytest

from mrparse.errors import (
    DataError,
    DependencyValidationError,
    TreebankParseError,
    TreeStructureError,
    UnsupportedFormatError,
)
from mrparse.trees import (
    BRACKETED,
    DISCBRACKET,
    AugmentedDepTree,
    ConstituentTree,
    DependencyTree,
    Node,
    Token,
    detect_format,
    parse_augmented,
    parse_constituent,
    parse_dependency,
    serialize_augmented,
    serialize_constituent,
    serialize_dependency,
    write_constituents,
)

from treegen import random_heads, random_tree, tokens

FIG_A = "(ROOT (S (NP (PRP She)) (VP (VBZ is) (ADVP (RB still)) (ADJP (JJ cautious))) (. .)))"
FIG_D = "(VROOT (S (NP (PPER 0=Es) (NP (PIAT 2=nichts) (NN 3=Interessantes))) (VVFIN 1=kam)) ($. 4=.))"


def data(name):
    return resources.files("mrparse").joinpath("data", name).read_text(encoding="utf-8")


def spans(tree):
    return {(n.label, tuple(sorted(n.yield_))) for n in tree.nodes()}


class TestConstituentIO:
    def test_figure_a(self):
        (tree,) = parse_constituent(FIG_A)
        assert tree.words == ["She", "is", "still", "cautious", "."]
        assert [t.pos for t in tree.terminals] == ["PRP", "VBZ", "RB", "JJ", "."]
        assert ("VP", (2, 3, 4)) in spans(tree)
        assert ("ADVP", (3,)) in spans(tree)
        assert serialize_constituent(tree) == FIG_A

    def test_figure_d_discontinuous(self):
        (tree,) = parse_constituent(FIG_D, DISCBRACKET)
        assert tree.words == ["Es", "kam", "nichts", "Interessantes", "."]
        assert ("NP", (1, 3, 4)) in spans(tree)
        assert serialize_constituent(tree, DISCBRACKET) == FIG_D

    def test_discontinuous_vp(self):
        (tree,) = parse_constituent(
            "(S (VP (VVFIN 1=kam) (S (NN 3=Interessantes))) (PPER 0=Es) (PIAT 2=nichts))", DISCBRACKET)
        assert ("VP", (2, 4)) in spans(tree)

    def test_missing_index_rejected(self):
        with pytest.raises(TreeStructureError, match="missing terminal indices"):
            parse_constituent("(S (VP 1=kam (S 3=Interessantes)) 0=Es)", DISCBRACKET)

    def test_duplicate_index_rejected(self):
        with pytest.raises(TreeStructureError, match="duplicate"):
            parse_constituent("(S (X 0=a) (X 0=b))", DISCBRACKET)

    def test_ptb_outer_bracket(self):
        (tree,) = parse_constituent("( (S (NN a) (VB b)) )")
        assert tree.root.label == "S"

    def test_unbalanced(self):
        with pytest.raises(TreebankParseError) as err:
            parse_constituent("(S (NN a)\n(VB b)")
        assert err.value.line == 1
        with pytest.raises(TreebankParseError):
            parse_constituent("(S (NN a)))")

    def test_bracketed_rejects_discontinuous(self):
        (tree,) = parse_constituent(FIG_D, DISCBRACKET)
        with pytest.raises(UnsupportedFormatError):
            serialize_constituent(tree, BRACKETED)

    def test_detect_format(self):
        assert detect_format(FIG_A) == BRACKETED
        assert detect_format(FIG_D) == DISCBRACKET

    @pytest.mark.parametrize("fmt", [BRACKETED, DISCBRACKET])
    def test_random_roundtrip(self, fmt):
        rng = random.Random(3)
        for _ in range(500):
            tree = random_tree(rng, rng.randint(1, 10), discontinuous=fmt == DISCBRACKET,
                               unary_prob=0.2, headed=False)
            text = serialize_constituent(tree, fmt)
            assert parse_constituent(text, fmt) == [tree]

    def test_negra_sample_byte_identical(self):
        text = data("negra_sample.discbracket")
        assert write_constituents(parse_constituent(text, DISCBRACKET), DISCBRACKET) == text

    def test_node_order_canonical(self):
        a = Node("X", [3, 1], head=0)
        b = Node("X", [1, 3], head=1)
        assert a == b and a.head_child == 3

    def test_overlapping_children(self):
        with pytest.raises(TreeStructureError):
            Node("X", [1, Node("Y", [1, 2])])

    def test_root_must_cover(self):
        with pytest.raises(TreeStructureError):
            ConstituentTree(tokens(3), Node("S", [1, 2]))


class TestDependencyIO:
    def test_figure_c(self):
        (tree,) = parse_dependency(data("figure1c.conll"))
        assert tree.heads == (4, 4, 4, 0, 4)
        assert tree.labels == ("nsubj", "cop", "advmod", "root", "punct")
        assert serialize_dependency([tree]) == data("figure1c.conll")

    def test_random_roundtrip(self):
        rng = random.Random(5)
        trees = []
        for _ in range(200):
            n = rng.randint(1, 12)
            trees.append(DependencyTree(tokens(n, rng), random_heads(rng, n),
                                        [rng.choice(["a", "b", "c"]) for _ in range(n)]))
        assert parse_dependency(serialize_dependency(trees)) == trees

    def test_comments_skipped(self):
        text = "# sent_id = 1\n" + data("figure1c.conll")
        assert len(parse_dependency(text)) == 1

    def test_cycle_reports_sentence(self):
        good = data("figure1c.conll")
        bad = "1\ta\t_\tX\tX\t_\t2\tx\t_\t_\n2\tb\t_\tX\tX\t_\t1\tx\t_\t_\n"
        with pytest.raises(DependencyValidationError, match="sentence 2"):
            parse_dependency(good + bad)

    @pytest.mark.parametrize("heads", [(1,), (0, 5), (2, 3, 1)])
    def test_invalid_heads(self, heads):
        with pytest.raises(DependencyValidationError):
            DependencyTree(tokens(len(heads)), heads, ["x"] * len(heads))

    def test_bad_columns(self):
        with pytest.raises(TreebankParseError) as err:
            parse_dependency("1\ta\t_\n")
        assert err.value.line == 1

    def test_data_errors_are_value_errors(self):
        assert issubclass(DataError, ValueError)
        with pytest.raises(TreeStructureError):
            Token(0, "x")

    def test_augmented_roundtrip(self):
        base = DependencyTree(tokens(3), (2, 0, 2), ("NP#1", "root", "VP#1"))
        aug = AugmentedDepTree(base, ("NP", None, "ADVP+RB"))
        assert parse_augmented(serialize_augmented([aug])) == [aug]

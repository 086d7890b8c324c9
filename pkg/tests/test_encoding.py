import random
from importlib import resources

import pytest

from mrparse.encoding import (
    assign_heads,
    collapse_unary_chains,
    decode,
    encode,
    is_continuous,
    is_projective,
    repair,
    restore_unary_chains,
    split_label,
    tree_to_augmented,
)
from mrparse.errors import DataError
from mrparse.headrules import HeadRuleSet, parse_head_rules
from mrparse.trees import (
    DISCBRACKET,
    AugmentedDepTree,
    ConstituentTree,
    DependencyTree,
    Node,
    parse_constituent,
)

from treegen import all_trees, dep_tree, projective_by_descendants, random_heads, random_tree, tokens

FIG_A = "(ROOT (S (NP (PRP She)) (VP (VBZ is) (ADVP (RB still)) (ADJP (JJ cautious))) (. .)))"
FIG_D = "(VROOT (S (NP (PPER 0=Es) (NP (PIAT 2=nichts) (NN 3=Interessantes))) (VVFIN 1=kam)) ($. 4=.))"


@pytest.fixture(scope="module")
def rules():
    text = resources.files("mrparse").joinpath("data", "demo.rules").read_text()
    return parse_head_rules(text)


class TestFigures:
    def test_figure_a(self, rules):
        (tree,) = parse_constituent(FIG_A)
        aug = tree_to_augmented(tree, rules)
        assert aug.heads == (2, 0, 2, 2, 2)
        assert aug.labels == ("ROOT+S#2", "root", "VP#1", "VP#1", "ROOT+S#2")
        assert aug.leaf_unaries == ("NP", None, "ADVP", "ADJP", None)
        assert decode(aug) == assign_heads(tree, rules)

    def test_figure_d(self, rules):
        (tree,) = parse_constituent(FIG_D, DISCBRACKET)
        aug = tree_to_augmented(tree, rules)
        assert aug.heads == (4, 0, 4, 2, 2)
        assert aug.labels == ("NP#2", "root", "NP#1", "S#1", "VROOT#2")
        assert aug.leaf_unaries == (None,) * 5
        assert decode(aug) == assign_heads(tree, rules)

    def test_figure_duality(self, rules):
        (a,) = parse_constituent(FIG_A)
        (d,) = parse_constituent(FIG_D, DISCBRACKET)
        assert is_continuous(a) and is_projective(tree_to_augmented(a, rules))
        assert not is_continuous(d) and not is_projective(tree_to_augmented(d, rules))


class TestRoundTrip:
    def test_unariless(self):
        rng = random.Random(11)
        for _ in range(300):
            tree = random_tree(rng, rng.randint(1, 10), discontinuous=rng.random() < 0.5)
            assert decode(encode(tree)) == tree

    def test_with_unaries(self):
        rng = random.Random(12)
        for _ in range(300):
            tree = random_tree(rng, rng.randint(1, 10), rng.random() < 0.5, unary_prob=0.3)
            collapsed, leaf = collapse_unary_chains(tree)
            assert restore_unary_chains(collapsed, leaf) == tree
            assert decode(encode(collapsed, leaf)) == tree

    def test_collapsed_has_no_unaries(self):
        rng = random.Random(13)
        for _ in range(100):
            collapsed, _ = collapse_unary_chains(random_tree(rng, 6, unary_prob=0.5))
            assert all(len(n.children) > 1 for n in collapsed.nodes())

    def test_chain_order(self):
        tree = parse_constituent("(A (B (C (X a) (Y b))))")[0]
        tree = assign_heads(tree, HeadRuleSet())
        collapsed, leaf = collapse_unary_chains(tree)
        assert collapsed.root.label == "A+B+C"
        single = parse_constituent("(A (B (X a)))")[0]
        collapsed, leaf = collapse_unary_chains(assign_heads(single, HeadRuleSet()))
        assert collapsed.root == 1 and leaf == ("A+B",)

    def test_encode_rejects_unary(self):
        tree = random_tree(random.Random(0), 4)
        with pytest.raises(DataError, match="unary"):
            encode(type(tree)(tree.terminals, Node("TOP", [tree.root], 0)))

    def test_encode_rejects_unheaded(self):
        tree = random_tree(random.Random(0), 4, headed=False)
        with pytest.raises(DataError, match="head"):
            encode(tree)


class TestDuality:
    def test_continuous_encodes_projective(self):
        rng = random.Random(14)
        for _ in range(500):
            tree = random_tree(rng, rng.randint(1, 10), discontinuous=False)
            assert is_continuous(tree) and is_projective(encode(tree))

    def test_non_projective_decodes_discontinuous(self):
        rng = random.Random(17)
        hits = 0
        for _ in range(500):
            tree = random_tree(rng, rng.randint(1, 10))
            if not is_projective(encode(tree)):
                hits += 1
                assert not is_continuous(tree)
        assert hits > 50

    def test_hidden_gap_counterexample(self):
        # the gap of PP {1,2,4} is filled by word 3 attached to the same
        # head word one level up, so no arc crosses
        inner = Node("PP", [1, 2, 4], head=0)
        tree = ConstituentTree(tokens(5), Node("PP", [Node("X", [inner, 3], head=0), 5], head=1))
        aug = encode(tree)
        assert aug.heads == (5, 1, 1, 1, 0)
        assert not is_continuous(tree)
        assert is_projective(aug)
        assert decode(aug) == tree

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_projective_exhaustive(self, n):
        for heads in all_trees(n):
            assert is_projective(dep_tree(heads)) == projective_by_descendants(heads)

    def test_projective_random_long(self):
        rng = random.Random(15)
        for _ in range(300):
            heads = random_heads(rng, rng.randint(6, 12))
            assert is_projective(dep_tree(heads)) == projective_by_descendants(heads)


class TestRepair:
    def test_multiple_roots(self):
        heads, levels = repair((0, 0, 2), ("root", "root", "X#1"))
        assert heads == [0, 1, 2]
        assert levels[1] == [("VROOT", [2])]

    def test_gap_in_levels(self):
        _, levels = repair((0, 1, 1), ("root", "A#1", "B#5"))
        assert levels[1] == [("A", [2]), ("B", [3])]

    def test_conflicting_symbols(self):
        _, levels = repair((0, 1, 1), ("root", "A#1", "B#1"))
        assert levels[1] == [("A", [2, 3])]

    @pytest.mark.parametrize("label,expected", [
        ("VP#2", ("VP", 2)), ("A+B#1", ("A+B", 1)), ("junk", ("junk", 1)),
        ("X#0", ("X#0", 1)), ("C#x", ("C#x", 1)), ("#", ("#", 1)),
    ])
    def test_split_label(self, label, expected):
        assert split_label(label) == expected

    def test_decode_is_total(self):
        rng = random.Random(16)
        labels = ["A#1", "B#2", "C#7", "junk", "root", "D+E#1"]
        for _ in range(300):
            n = rng.randint(1, 10)
            base = DependencyTree(tokens(n), random_heads(rng, n), [rng.choice(labels) for _ in range(n)])
            lu = [rng.choice([None, "U", "U+V"]) for _ in range(n)]
            tree = decode(AugmentedDepTree(base, lu))
            assert tree.words == base.words


class TestHeadRules:
    RULES = """
    # comment
    default right-to-left
    NP  right-to-left  NN NNS *
    VP  left-to-right  VB VP
    VP  r  MD
    """

    def test_priority_then_direction(self):
        rules = parse_head_rules(self.RULES)
        assert rules.find_head("NP", ["DT", "NN", "NN"]) == 2
        assert rules.find_head("NP", ["DT", "JJ"]) == 1
        assert rules.find_head("VP", ["MD", "VP", "VB"]) == 2
        # second line for VP is tried once the first fails
        assert rules.find_head("VP", ["MD", "RB", "MD"]) == 2
        # no rule matches: default direction
        assert rules.find_head("VP", ["RB", "JJ"]) == 1
        assert rules.find_head("UNKNOWN", ["A", "B", "C"]) == 2

    def test_hash_is_not_a_comment_inside_rules(self):
        rules = parse_head_rules("NP left #  NN")
        assert rules.find_head("NP", ["NN", "#"]) == 1

    def test_bad_direction(self):
        with pytest.raises(DataError, match="line 1"):
            parse_head_rules("NP sideways NN")

    def test_assign_uses_phrase_labels(self):
        tree = parse_constituent("(S (NP (DT the) (NN dog)) (VP (VB runs)))")[0]
        rules = parse_head_rules("S left VP\nNP right NN")
        headed = assign_heads(tree, rules)
        assert headed.root.head_child.label == "VP"
        assert headed.head_word(headed.root) == 3
        assert headed.head_word(headed.root.children[0]) == 2

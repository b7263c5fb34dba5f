import random

import pytest
from hypothesis import given

from changepat.aterm import AInt, AList, Appl, children, size
from changepat.diff import EditOp, EditTree, Scorer, edit_trees, keep_count, match_score
from oracles import brute_match, kept_skeleton, reference_match, skeleton_size
from treegen import aterms, random_tree

F12 = Appl("F", [AInt(1), AInt(2)])
F2 = Appl("F", [AInt(2)])


def ops(e: EditTree):
    return (e.op, e.term if not e.children else None, tuple(ops(c) for c in e.children))


def erase(e: EditTree):
    """Rebuild the tree from the annotated nodes alone."""
    kids = tuple(erase(c) for c in e.children)
    t = e.term
    if isinstance(t, Appl):
        return Appl(t.label, kids)
    if isinstance(t, AList):
        return AList(kids)
    return t


class TestMatchScore:
    def test_identical(self):
        assert match_score(F12, F12) == 3

    def test_disjoint_roots(self):
        assert match_score(Appl("A", []), Appl("B", [])) == 0

    def test_one_aligned_child(self):
        assert match_score(F12, F2) == 2
        assert brute_match(F12, F2) == 2

    def test_lists_match_each_other_not_appls(self):
        assert match_score(AList([AInt(1)]), AList([AInt(1), AInt(2)])) == 2
        assert match_score(AList([]), Appl("L", [])) == 0

    def test_ints_compare_values(self):
        assert match_score(AInt(1), AInt(1)) == 1
        assert match_score(AInt(1), AInt(2)) == 0

    def test_order_preserved(self):
        a = Appl("F", [Appl("x"), Appl("y")])
        b = Appl("F", [Appl("y"), Appl("x")])
        assert match_score(a, b) == 2

    def test_matches_need_matched_parents(self):
        a = Appl("F", [Appl("G", [Appl("x")])])
        b = Appl("F", [Appl("H", [Appl("x")])])
        assert match_score(a, b) == 1

    def test_shared_scorer_agrees(self):
        sc = Scorer()
        rng = random.Random(5)
        for _ in range(200):
            a, b = random_tree(rng, 15), random_tree(rng, 15)
            assert match_score(a, b, sc) == match_score(a, b)

    @given(aterms)
    def test_self_score_is_size(self, t):
        assert match_score(t, t) == size(t)

    @given(aterms, aterms)
    def test_bounds_and_symmetry(self, a, b):
        s = match_score(a, b)
        assert 0 <= s <= min(size(a), size(b))
        assert s == match_score(b, a)

    @given(aterms, aterms)
    def test_against_reference_recursion(self, a, b):
        assert match_score(a, b) == reference_match(a, b)


def test_brute_force_oracle_on_small_random_pairs():
    rng = random.Random(11)
    checked = 0
    while checked < 400:
        a, b = random_tree(rng, 7), random_tree(rng, 7)
        if size(a) > 7 or size(b) > 7:
            continue
        assert match_score(a, b) == brute_match(a, b), (a, b)
        checked += 1


class TestEditTrees:
    def test_one_aligned_child(self):
        left, right = edit_trees(F12, F2)
        assert left.op is EditOp.KEEP
        assert [c.op for c in left.children] == [EditOp.DELETE, EditOp.KEEP]
        assert [c.term for c in left.children] == [AInt(1), AInt(2)]
        assert right.op is EditOp.KEEP
        assert [c.op for c in right.children] == [EditOp.KEEP]

    def test_identical_all_keep(self):
        t = Appl("F", [AList([AInt(1), Appl("G")]), AInt(3)])
        left, right = edit_trees(t, t)
        assert keep_count(left) == keep_count(right) == size(t)

    def test_disjoint_single_delete(self):
        left, right = edit_trees(Appl("A", []), Appl("B", []))
        assert (left.op, left.children) == (EditOp.DELETE, ())
        assert (right.op, right.children) == (EditOp.DELETE, ())

    def test_deleted_subtree_is_all_delete(self):
        left, _ = edit_trees(Appl("F", [Appl("G", [AInt(1)])]), Appl("F"))
        g = left.children[0]
        assert g.op is EditOp.DELETE and g.children[0].op is EditOp.DELETE

    def test_tie_prefers_diagonal(self):
        # F(x, x) vs F(x): the kept x is the later one (diagonal taken at the end)
        left, _ = edit_trees(Appl("F", [Appl("x"), Appl("x")]), Appl("F", [Appl("x")]))
        assert [c.op for c in left.children] == [EditOp.DELETE, EditOp.KEEP]

    @given(aterms, aterms)
    def test_keep_counts_equal_score(self, a, b):
        left, right = edit_trees(a, b)
        s = match_score(a, b)
        assert keep_count(left) == keep_count(right) == s

    @given(aterms, aterms)
    def test_shape_preserving(self, a, b):
        left, right = edit_trees(a, b)
        assert erase(left) == a and erase(right) == b
        assert left.term == a and right.term == b

    @given(aterms, aterms)
    def test_kept_nodes_form_a_common_embedding(self, a, b):
        left, right = edit_trees(a, b)
        sl, sr = kept_skeleton(left), kept_skeleton(right)
        assert sl == sr
        # no kept node hides under a deleted ancestor
        assert skeleton_size(sl) == keep_count(left)

    def test_deterministic(self):
        rng = random.Random(2)
        for _ in range(50):
            a, b = random_tree(rng, 20), random_tree(rng, 20)
            assert ops(edit_trees(a, b)[0]) == ops(edit_trees(a, b)[0])


def test_alignment_positions_are_increasing():
    sc = Scorer()
    rng = random.Random(8)
    for _ in range(200):
        a, b = random_tree(rng, 20), random_tree(rng, 20)
        x, y = sc.intern(a), sc.intern(b)
        if sc.score(x, y) == 0:
            continue
        pairs = sc.alignment(x, y)
        left = [i for i, _ in pairs if i is not None]
        right = [j for _, j in pairs if j is not None]
        assert left == sorted(left) == list(range(len(children(a))))
        assert right == sorted(right) == list(range(len(children(b))))

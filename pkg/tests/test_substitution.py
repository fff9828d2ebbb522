import math

import pytest

from hybridqc.errors import ResourceLimitError, ValidationError
from hybridqc.substitution import (
    FCC,
    PD,
    PF,
    RS,
    TM,
    Substitution,
    SubstitutionMatrix,
    apply_literal_map,
    primitivity_power,
    product_substitution,
    spectral_info,
)

BUILTINS = [FCC, TM, PD, PF, RS]


def expand_oracle(images, letter, depth):
    """Independent letter-by-letter recursive expansion of a k-fold image."""
    if depth == 0:
        return letter
    return "".join(expand_oracle(images, c, depth - 1) for c in images[letter])


class TestApply:
    def test_tm_single_letter(self):
        assert TM.apply("a") == "ab"

    def test_empty_word(self):
        assert TM.apply("") == ""

    def test_pd_concatenation(self):
        assert PD.apply("ab") == "abaa"

    def test_outside_alphabet(self):
        with pytest.raises(ValidationError):
            TM.apply("ax")


class TestIterate:
    def test_tm_prefix(self):
        assert TM.iterate("a", 4) == "abbabaabbaababba"

    def test_pd_prefix(self):
        assert PD.iterate("a", 3) == "abaaabab"

    def test_fcc_prefix(self):
        assert FCC.iterate("a", 3) == "abaab"

    def test_zero_iterations(self):
        assert FCC.iterate("ab", 0) == "ab"

    @pytest.mark.parametrize("sub", BUILTINS, ids=lambda s: s.name)
    def test_matches_recursive_oracle(self, sub):
        for letter in sub.alphabet:
            for k in range(5):
                assert sub.iterate(letter, k) == expand_oracle(sub.images, letter, k)

    @pytest.mark.parametrize("sub", BUILTINS, ids=lambda s: s.name)
    def test_length_follows_matrix_powers(self, sub):
        # |image^k(letter)| equals the row sum of the k-th matrix power
        m = sub.matrix()
        for k in range(1, 11):
            mk = m.power(k)
            for i, letter in enumerate(sub.alphabet):
                expected = sum(mk.entries[i])
                if expected > (1 << 20):
                    continue
                assert len(sub.iterate(letter, k)) == expected

    def test_growth_cap(self):
        with pytest.raises(ResourceLimitError):
            TM.iterate("a", 40, cap=1 << 10)


class TestFixedPointPrefix:
    def test_tm(self):
        assert TM.fixed_point_prefix("a", 16) == "abbabaabbaababba"

    def test_pd(self):
        assert PD.fixed_point_prefix("a", 8) == "abaaabab"

    def test_pf_oracle_checked(self):
        # oracle: third expansion of the seed letter
        assert expand_oracle(PF.images, "1", 3) == "12321432"
        assert PF.fixed_point_prefix("1", 8) == "12321432"

    def test_exact_length(self):
        assert len(TM.fixed_point_prefix("a", 10)) == 10

    @pytest.mark.parametrize("sub,seed", [(FCC, "a"), (TM, "a"), (PD, "a"), (PF, "1")])
    def test_prefix_nesting(self, sub, seed):
        long = sub.fixed_point_prefix(seed, 400)
        for n in (1, 7, 100, 399):
            assert long.startswith(sub.fixed_point_prefix(seed, n))

    @pytest.mark.parametrize("sub,seed", [(FCC, "a"), (TM, "a"), (PD, "a"), (PF, "1")])
    def test_stable_under_application(self, sub, seed):
        w = sub.fixed_point_prefix(seed, 100)
        assert sub.apply(w).startswith(w)

    def test_non_extendable_seed(self):
        with pytest.raises(ValidationError):
            FCC.fixed_point_prefix("b", 8)

    def test_second_tm_fixed_point(self):
        # the image of b also starts with b, so TM grows two fixed points
        assert TM.fixed_point_prefix("b", 8) == "baababba"

    def test_bad_min_len(self):
        with pytest.raises(ValidationError):
            TM.fixed_point_prefix("a", 0)


class TestMatrix:
    def test_tm_entries(self):
        assert TM.matrix().entries == ((1, 1), (1, 1))

    def test_fcc_entries(self):
        assert FCC.matrix().entries == ((1, 1), (1, 0))

    def test_pd_entries(self):
        assert PD.matrix().entries == ((1, 1), (2, 0))

    def test_row_sums_are_image_lengths(self):
        for sub in BUILTINS:
            for letter, total in zip(sub.alphabet, sub.matrix().row_sums()):
                assert total == len(sub.images[letter])

    @pytest.mark.parametrize("sub", BUILTINS, ids=lambda s: s.name)
    def test_square_rule_matrix_is_matrix_squared(self, sub):
        squared = Substitution({a: sub.apply(img) for a, img in sub.images.items()})
        assert squared.matrix().entries == (sub.matrix() @ sub.matrix()).entries

    def test_rejects_negative_entries(self):
        with pytest.raises(ValidationError):
            SubstitutionMatrix(("a", "b"), ((1, -1), (0, 1)))


class TestPrimitivity:
    @pytest.mark.parametrize(
        "sub,expected", [(TM, 1), (FCC, 2), (PD, 2), (PF, 3)], ids=lambda x: str(x)
    )
    def test_known_powers(self, sub, expected):
        assert primitivity_power(sub) == expected

    @pytest.mark.parametrize("sub", BUILTINS, ids=lambda s: s.name)
    def test_agrees_with_letter_scan(self, sub):
        # direct definition: smallest k with every k-fold image containing
        # every letter of the alphabet
        def scan():
            for k in range(1, 7):
                if all(
                    set(sub.iterate(a, k)) == set(sub.alphabet) for a in sub.alphabet
                ):
                    return k
            return None

        assert primitivity_power(sub, max_k=6) == scan()

    def test_absent_for_reducible(self):
        two_cycle = Substitution({"a": "a", "b": "b"})
        assert primitivity_power(two_cycle, max_k=8) is None


class TestSpectralInfo:
    def test_tm(self):
        info = spectral_info(TM.matrix())
        assert info.dominant == pytest.approx(2.0, abs=1e-10)
        assert info.others == pytest.approx((0.0,), abs=1e-10)
        assert info.pisot

    def test_fcc_golden_ratio(self):
        info = spectral_info(FCC.matrix())
        golden = (1 + math.sqrt(5)) / 2
        assert info.dominant == pytest.approx(golden, rel=1e-12)
        assert info.pisot
        assert info.others[0] == pytest.approx(golden - 1, rel=1e-9)

    def test_pd_not_pisot(self):
        info = spectral_info(PD.matrix())
        assert info.dominant == pytest.approx(2.0, abs=1e-10)
        assert not info.pisot
        # the -1 eigenvalue sits on the unit circle, a boundary verdict
        assert info.indeterminate

    def test_pf_not_pisot(self):
        # exact spectrum of the four-letter rule: 2, 1, 0, 0
        info = spectral_info(PF.matrix())
        assert info.dominant == pytest.approx(2.0, abs=1e-10)
        assert not info.pisot
        assert max(info.others) == pytest.approx(1.0, abs=1e-7)

    @pytest.mark.parametrize("sub", BUILTINS, ids=lambda s: s.name)
    def test_perron_dominance(self, sub):
        info = spectral_info(sub.matrix())
        assert info.dominant > 0
        assert all(info.dominant >= o - 1e-12 for o in info.others)

    def test_size_cap(self):
        big = SubstitutionMatrix(tuple("abcdefghijklmnopq"), tuple(tuple(1 for _ in range(17)) for _ in range(17)))
        with pytest.raises(ValidationError):
            spectral_info(big)


class TestLiteralMap:
    def test_pf_projection(self):
        assert apply_literal_map("1232", {"1": "a", "2": "a", "3": "b", "4": "b"}) == "aaba"

    def test_identity(self):
        assert apply_literal_map("abba", {"a": "a", "b": "b"}) == "abba"

    def test_empty(self):
        assert apply_literal_map("", {"a": "b"}) == ""

    def test_unmapped_letter(self):
        with pytest.raises(ValidationError):
            apply_literal_map("abc", {"a": "x", "b": "y"})


class TestProductSubstitution:
    def test_tm_pd_pairs(self):
        prod = product_substitution(TM, PD)
        assert prod.image_pairs(("a", "a")) == (("a", "a"), ("b", "b"))
        assert prod.image_pairs(("b", "b")) == (("b", "a"), ("a", "a"))

    def test_tm_tm_pair(self):
        prod = product_substitution(TM, TM)
        assert prod.image_pairs(("a", "b")) == (("a", "b"), ("b", "a"))

    def test_product_alphabet_size(self):
        prod = product_substitution(TM, PD)
        assert len(prod.sub.alphabet) == 4
        assert prod.sub.constant_length == 2

    def test_tm_pd_product_is_primitive(self):
        prod = product_substitution(TM, PD)
        assert primitivity_power(prod.sub, max_k=8) is not None

    def test_rejects_non_constant_length(self):
        with pytest.raises(ValidationError):
            product_substitution(TM, FCC)

    def test_rejects_unequal_lengths(self):
        three = Substitution({"a": "aaa", "b": "aab"})
        with pytest.raises(ValidationError):
            product_substitution(TM, three)


class TestValidation:
    def test_empty_image(self):
        with pytest.raises(ValidationError):
            Substitution({"a": ""})

    def test_image_outside_alphabet(self):
        with pytest.raises(ValidationError):
            Substitution({"a": "ax"})

    def test_multichar_letter(self):
        with pytest.raises(ValidationError):
            Substitution({"ab": "ab"})

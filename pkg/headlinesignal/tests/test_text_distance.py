from functools import lru_cache
from itertools import product
from unittest import TestCase, main

from headlinesignal.text_distance import osa_distance, similarity


@lru_cache(maxsize=None)
def reference_osa(a, b):
    """The OSA recurrence written out on prefixes, no table."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    best = min(reference_osa(a[:-1], b) + 1,
               reference_osa(a, b[:-1]) + 1,
               reference_osa(a[:-1], b[:-1]) + (a[-1] != b[-1]))
    if len(a) > 1 and len(b) > 1 and a[-1] == b[-2] and a[-2] == b[-1]:
        best = min(best, reference_osa(a[:-2], b[:-2]) + 1)
    return best


def all_strings(alphabet, max_length):
    for n in range(max_length + 1):
        for chars in product(alphabet, repeat=n):
            yield ''.join(chars)


class TestOsaDistance(TestCase):
    def test_examples(self):
        self.assertEqual(osa_distance('abc', 'abc'), 0)
        self.assertEqual(osa_distance('abc', ''), 3)
        self.assertEqual(osa_distance('', 'abc'), 3)
        self.assertEqual(osa_distance('kitten', 'sitting'), 3)
        self.assertEqual(osa_distance('abcd', 'abdc'), 1)

    def test_restricted_transposition(self):
        # the unrestricted distance would be 2
        self.assertEqual(osa_distance('CA', 'ABC'), 3)
        self.assertEqual(reference_osa('CA', 'ABC'), 3)

    def test_reference_equivalence(self):
        strings = list(all_strings('abc', 5))
        for a in strings:
            for b in strings:
                self.assertEqual(osa_distance(a, b), reference_osa(a, b),
                                 (a, b))

    def test_properties(self):
        strings = list(all_strings('ab', 4))
        for a in strings:
            for b in strings:
                d = osa_distance(a, b)
                self.assertEqual(d, osa_distance(b, a))
                self.assertLessEqual(abs(len(a) - len(b)), d)
                self.assertLessEqual(d, max(len(a), len(b)))
                self.assertEqual(d == 0, a == b)

    def test_code_points(self):
        self.assertEqual(osa_distance('café', 'cafe'), 1)
        self.assertEqual(osa_distance('\U0001f600a', 'a\U0001f600'), 1)


class TestSimilarity(TestCase):
    def test_examples(self):
        self.assertEqual(similarity('abc', 'abc'), 1.0)
        self.assertEqual(similarity('abc', ''), 0.0)
        self.assertEqual(similarity('', ''), 1.0)
        self.assertEqual(similarity('abcd', 'abcx'), 0.75)

    def test_near_duplicate_headline(self):
        value = similarity('acme beats earnings estimates',
                           'acme beats earnings estimate')
        self.assertAlmostEqual(value, 1 - 1 / 29)
        self.assertGreater(value, 0.6)

    def test_bounds(self):
        for a in all_strings('ab', 3):
            for b in all_strings('ab', 3):
                self.assertGreaterEqual(similarity(a, b), 0.0)
                self.assertLessEqual(similarity(a, b), 1.0)


if __name__ == '__main__':
    main()

"""
Optimal String Alignment distance (restricted Damerau-Levenshtein).

Edits are insertions, deletions, substitutions and transpositions of two
adjacent characters, with no substring edited more than once. Unlike the
unrestricted distance, OSA is not a metric: ('CA', 'ABC') is 3, not 2.
Units are Unicode code points; callers normalize text first.
"""


def osa_distance(a: str, b: str) -> int:
    """
    Usage::

        >>> osa_distance('kitten', 'sitting')
        3
        >>> osa_distance('abcd', 'abdc')
        1
        >>> osa_distance('CA', 'ABC')
        3

    """
    if a == b:
        return 0
    len_a = len(a)
    len_b = len(b)
    if len_a == 0:
        return len_b
    if len_b == 0:
        return len_a

    # rows i-2, i-1 and i of the (len_a+1) x (len_b+1) table
    prev2 = None
    prev = list(range(len_b + 1))
    for i in range(1, len_a + 1):
        cur = [i] + [0] * len_b
        ca = a[i - 1]
        for j in range(1, len_b + 1):
            cb = b[j - 1]
            cost = 0 if ca == cb else 1
            d = min(prev[j] + 1,          # deletion
                    cur[j - 1] + 1,       # insertion
                    prev[j - 1] + cost)   # substitution
            if i > 1 and j > 1 and ca == b[j - 2] and a[i - 2] == cb:
                d = min(d, prev2[j - 2] + 1)  # transposition
            cur[j] = d
        prev2, prev = prev, cur
    return prev[len_b]


def similarity(a: str, b: str) -> float:
    """1 - distance / max length; 1.0 for two empty strings."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - osa_distance(a, b) / longest

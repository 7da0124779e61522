"""Shared fixtures and independent reference data for the test suite.

The matrix literals below are independent transcriptions of the reference
tables the package's constants are frozen from; the fidelity tests compare
the two copies entry for entry.
"""

import random

import pytest

from cfft2047 import Field, build_plan, compile_plan


# --- reference tables, transcribed independently of the package sources ---

REFERENCE_T5_R = """
111110000
011111000
001111100
000111110
000011111
010010000
001000000
000110000
000100000
000011000
000001000
000000100
000010010
000010000
"""

REFERENCE_T5_P = """
10000
01000
00100
00010
00001
11000
10100
10010
01100
01001
00110
00101
00011
11011
"""

REFERENCE_T5_Q = """
00001000010111
00010001001011
00100010101100
01000100110001
10000111000001
"""

REFERENCE_S = """
11111111111
11000000000
10100000000
10010000000
10001000000
10000100000
10000010000
10000001000
10000000100
10000000010
10000000001
"""

# Truncated rendering of the forward transform matrix: ten visible rows and
# ten visible columns (row 10 and column 9 of the full matrix are omitted).
REFERENCE_T_TRUNCATED = """
1111111111
1000000001
0100000001
0010000001
0001000001
0000100001
0000010001
0000001001
0000000101
0000000011
"""

REFERENCE_PI = (
    """
1111101111
1111011111
1110111111
1101111111
1011111111
0111111111
1111111111
1111111110
1111111101
""",
    """
1000010000
0000100000
0001000001
0010000010
0100000100
1000001000
0000010000
0000100001
0001000010
""",
    """
0000010000
0000100001
0001000010
0010000100
0100001000
1000010000
0000100000
0001000001
0010000010
""",
    """
1000010000
0100001000
0010000100
0001000010
0000100001
""",
    """
0000010000
0000001000
0000000100
0000000010
0000000001
""",
    """
1000000000
0100000000
0010000000
0001000000
0000100000
""",
)


def parse_rows(text):
    return [[int(c) for c in ln.strip()] for ln in text.strip().splitlines()]


def schoolbook_mul(a, b, genpoly=(1 << 11) | (1 << 2) | 1):
    """Shift-and-xor polynomial product followed by long division."""
    acc = 0
    shift = 0
    while b:
        if b & 1:
            acc ^= a << shift
        b >>= 1
        shift += 1
    for d in range(acc.bit_length() - 1, 10, -1):
        if (acc >> d) & 1:
            acc ^= genpoly << (d - 11)
    return acc


def derive_coefficient_maps():
    """Re-derive the three 9x10 coefficient maps from the Toeplitz-core
    formula: diagonal d picks component d+1 or d+12 (when in range 0..9)
    plus the sum of all ten components, everything mod 2."""

    def core_form(d):
        s = set(range(10))
        if 0 <= d + 1 <= 9:
            s ^= {d + 1}
        elif 0 <= d + 12 <= 9:
            s ^= {d + 12}
        return s

    def rows(block):
        out = []
        for k in range(9):
            if block == "top-left":
                form = core_form(4 - k)
            elif block == "top-right-minus":
                form = core_form(-1 - k) ^ core_form(4 - k)
            else:  # bottom-left-minus
                form = core_form(9 - k) ^ core_form(4 - k)
            out.append([1 if j in form else 0 for j in range(10)])
        return out

    return rows("top-left"), rows("top-right-minus"), rows("bottom-left-minus")


def random_vector(rng: random.Random, n: int):
    return [rng.randrange(2048) for _ in range(n)]


def unit_vector(n: int, i: int):
    v = [0] * n
    v[i] = 1
    return v


@pytest.fixture(scope="session")
def field():
    return Field()


@pytest.fixture(scope="session")
def plan23(field):
    return build_plan(field, 23)


@pytest.fixture(scope="session")
def plan89(field):
    return build_plan(field, 89)


@pytest.fixture(scope="session")
def plan2047(field):
    return build_plan(field, 2047)


@pytest.fixture(scope="session")
def prog23(plan23):
    return compile_plan(plan23)


@pytest.fixture(scope="session")
def prog2047(plan2047):
    return compile_plan(plan2047)

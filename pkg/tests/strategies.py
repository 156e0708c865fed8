"""Hypothesis strategies for Pimenov-algebra elements with n <= 4 generators."""

from fractions import Fraction

from hypothesis import strategies as st

from ckquantum.nilpotent import Pim, Q2i

NGEN = 4

small = st.fractions(min_value=-4, max_value=4, max_denominator=4)
q2i = st.builds(Q2i, small, small, small, small)
nil_masks = st.integers(1, (1 << NGEN) - 1).map(lambda m: m << 1)
masks = st.integers(0, (1 << NGEN) - 1).map(lambda m: m << 1)
keys = st.tuples(masks, st.integers(0, 2), st.integers(-2, 2))
nil_keys = st.tuples(nil_masks, st.integers(0, 2), st.integers(-2, 2))

pims = st.dictionaries(keys, q2i, max_size=5).map(Pim)
nilpotents = st.dictionaries(nil_keys, q2i, max_size=4).map(Pim)
# exponents pim_exp accepts: c*v with half-integer c, plus a nilpotent part
half_ints = st.integers(-4, 4).map(lambda k: Fraction(k, 2))
exponents = st.builds(lambda c, nu: Pim.v(1, c) + nu, half_ints, nilpotents)
units = st.builds(lambda c, nu: Pim.scalar(c) + nu,
                  q2i.filter(bool), nilpotents)

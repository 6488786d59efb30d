"""Pure-Python hot loops for packed-monomial arithmetic.

A monomial is a non-negative ``int``: the low byte holds the geometric degree,
byte ``s`` (``s >= 1``) holds the exponent of the variable in slot ``s``.
The top bit of every byte is a guard bit and must stay clear, so a product
of two monomials is a single integer addition.

The compiled module ``_ckernels`` mirrors these signatures exactly.
"""

DEGREE_MASK = 0x7F


def mul_terms(a, b, cutoff, guard):
    """Truncated product of two term dicts.

    Terms whose geometric degree exceeds ``cutoff`` are dropped; zero
    coefficients are removed. ``guard`` is the overflow mask for the live
    variable slots.
    """
    if len(a) > len(b):
        a, b = b, a
    # bucket the longer operand by degree so the inner loop can stop early
    blist = sorted(b.items(), key=lambda t: t[0] & DEGREE_MASK)
    ends = [0] * (cutoff + 2)
    pos = 0
    nb = len(blist)
    for d in range(cutoff + 1):
        while pos < nb and (blist[pos][0] & DEGREE_MASK) <= d:
            pos += 1
        ends[d] = pos
    prefix = [blist[:ends[d]] for d in range(cutoff + 1)]
    out = {}
    get = out.get
    for ma, ca in a.items():
        room = cutoff - (ma & DEGREE_MASK)
        if room < 0:
            continue
        for mb, cb in prefix[room]:
            m = ma + mb
            out[m] = get(m, 0) + ca * cb
    if guard:
        for m in out:
            if m & guard:
                raise OverflowError("exponent overflow in packed monomial")
    return {m: c for m, c in out.items() if c}


def add_terms(a, b, sign):
    """``a + sign*b`` on term dicts (``sign`` is +1 or -1)."""
    out = dict(a)
    get = out.get
    if sign > 0:
        for m, c in b.items():
            out[m] = get(m, 0) + c
    else:
        for m, c in b.items():
            out[m] = get(m, 0) - c
    return {m: c for m, c in out.items() if c}


def truncate_terms(a, cutoff):
    return {m: c for m, c in a.items() if (m & DEGREE_MASK) <= cutoff}

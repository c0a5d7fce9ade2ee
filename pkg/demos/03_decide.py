"""
Deciding small Diophantine equations
====================================

decide() doubles T until some level holds more than half the probability,
then checks the proposed point with exact integer arithmetic. The quantum run
proposes; the integers dispose.
"""

from h10sim import DecideConfig, brute_force_search, decide, parse_polynomial

cases = ["(x-2)^2", "x + 1", "2x - 5", "(x-1)(x-3)", "x^2 + y^2 - 5"]

for text in cases:
    p = parse_polynomial(text)
    d = 16 if p.k == 1 else 8
    # unequal parameters keep x <-> y symmetric equations from splitting
    # their probability evenly between mirrored roots
    params = [2.0, 2.5][: p.k]
    report = decide(p, "su11", DecideConfig(d=d, params=params))
    oracle = brute_force_search(p, d - 1)
    print(f"{text:16s} {report.verdict.value:15s} witness={report.witness}  "
          f"T={report.final_T:g}  oracle={oracle}  degenerate={report.degeneracy_flag}")

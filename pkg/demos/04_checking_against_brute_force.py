"""
Independent checks: reduced words of the longest permutation count the
simple arrangements, and must agree with the dynamic program.
"""

from pseudobound import count_reroutings
from pseudobound.bipermutation import gen_complete_sequence
from pseudobound.oracle import crosscheck, reduced_word_classes

for n in range(2, 7):
    res = reduced_word_classes(n)
    dp = count_reroutings(gen_complete_sequence(n))
    print(f"n={n}: {res.words} reduced words in {res.classes} classes; dynamic program {dp}")

report = crosscheck(l_max=3, n_max=6)
print("\n".join(report.lines()))
print("all agree:", report.ok)

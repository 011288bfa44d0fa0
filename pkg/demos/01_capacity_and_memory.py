"""How much does channel memory buy?

We take the three-state chain Pi1 on (0, 1, e), where the erasure
probability out of every non-erasure state is 0.2, and compare the capacity
of the burst channel with the memoryless channel that has the same
single-letter statistics.
"""
import numpy as np

from burstnec import PI1, cn_closed_form, markov_model, memoryless_counterpart, nec_capacity

model = markov_model(PI1)
print("stationary law of (0, 1, e):", np.round(model.marginal, 6), "= (67, 50, 26)/143")

rep = nec_capacity(model)
print(f"erasure probability eps     {rep.eps:.6f}")
print(f"capacity C (= C_FB)         {rep.C:.6f} bits/use")
print(f"memoryless counterpart      {rep.C_DMC:.6f} bits/use")
print(f"gain from memory            {rep.gain_lower:.6f} bits/use (strict: {rep.gain_strict})")

# The same marginal with the memory stripped out gives exactly C_DMC.
iid = nec_capacity(memoryless_counterpart(model))
print(f"check: capacity of the i.i.d. twin = {iid.C:.6f}")

# Block capacities C_n increase towards C at rate 1/n.
print("\n n   C_n        C - C_n    n (C - C_n)")
for n in (1, 2, 4, 8, 16):
    cn = cn_closed_form(model, n)
    print(f"{n:2d}   {cn:.6f}   {rep.C - cn:.6f}   {n * (rep.C - cn):.6f}")

"""When the erasure indicator is not Markov.

For Pi2 the chance of an erasure depends on which non-erasure state we are
in, so the 0/e indicator process is a hidden Markov process and its entropy
rate has no closed form.  Block entropies give an upper bound and the
conditional entropy given the initial hidden state gives a lower bound;
both tighten as the block length grows.
"""
import time

from burstnec import PI2, markov_model, nec_capacity
from burstnec.entropy import block_entropy_Ztilde, ztilde_rate_bounds

model = markov_model(PI2)
print(" l    lower        upper        width      seconds")
for l in (2, 4, 8, 12, 16, 20):
    t0 = time.perf_counter()
    lo, hi = ztilde_rate_bounds(model, l)
    print(f"{l:2d}   {lo:.8f}   {hi:.8f}   {hi - lo:.2e}   {time.perf_counter() - t0:.2f}")

rep = nec_capacity(model, l=20)
print(f"\ncapacity bracket at l=20: [{rep.C_lower:.8f}, {rep.C_upper:.8f}] bits/use")
print(f"H(Ztilde^20) = {block_entropy_Ztilde(model, 20):.8f} bits")

"""A first look at the PR-box.

A PR-box is a two-party device: Alice puts in a bit x and reads a bit A,
Bob puts in y and reads B.  The outputs always satisfy A XOR B = x*y,
yet each output alone is a fair coin, so neither side can read anything
about the other side's input from their own data.  Run this script to
watch both facts hold.
"""
from qracbox import PRBox, ProtocolError
from qracbox.boxes import enumerate_pr_outputs
from qracbox.rng import make_rng

rng = make_rng(seed=2024)

print("== the defining correlation ==")
for x in (0, 1):
    for y in (0, 1):
        box = PRBox(rng)
        a = box.alice(x)
        b = box.bob(y)
        print(f"  x={x} y={y}  ->  A={a} B={b}   A^B={a ^ b}  x*y={x * y}")

print()
print("== exhaustive over the hidden coin: marginals are exactly uniform ==")
for x in (0, 1):
    for y in (0, 1):
        outs = enumerate_pr_outputs(x, y)
        p_a0 = sum(p for p, a, _ in outs if a == 0)
        p_b0 = sum(p for p, _, b in outs if b == 0)
        print(f"  x={x} y={y}:  P(A=0)={p_a0}  P(B=0)={p_b0}")

print()
print("== statistics over 20000 fresh boxes ==")
trials = 20000
a_zeros = 0
violations = 0
for _ in range(trials):
    x, y = int(rng.integers(2)), int(rng.integers(2))
    box = PRBox(rng)
    a = box.alice(x)
    b = box.bob(y)
    a_zeros += a == 0
    violations += (a ^ b) != x * y
print(f"  A=0 frequency: {a_zeros / trials:.4f}  (expect 0.5)")
print(f"  correlation violations: {violations}  (expect 0)")

print()
print("== the box is one-shot ==")
box = PRBox(rng)
box.alice(1)
try:
    box.alice(0)
except ProtocolError as exc:
    print(f"  second use rejected: {exc}")

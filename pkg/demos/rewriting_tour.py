"""Build a braided system and watch words reach their canonical form.

Run with ``python3 demos/rewriting_tour.py``.
"""
from braidedsuq.expr import evaluate, parse
from braidedsuq.ncalg import RewriteTrace, normalize, render_poly
from braidedsuq.suq2 import make_system

sys = make_system(1, 1)
print(f"system {sys.label}: {len(sys.rules)} rewrite rules")
print("cross rules between the spin copy and the device copy:")
for line in sys.dump_rules():
    if "a" in line and "x" in line:
        print("   ", line)

# A device letter written to the right of a spin letter moves left.
for text in ("x1 * a1", "x1* * a1", "y1 * c1*", "x1* * x1 + y1* * y1"):
    trace = RewriteTrace()
    value = normalize(evaluate(parse(text, sys), sys), sys, trace=trace)
    print(f"{text:>22}  ->  {render_poly(value)}   ({trace.steps} rewrites)")

"""Write processes as text, evaluate them, and print them back canonically."""
from pathlib import Path

from ptlab.circuit import evaluate, parse, pretty_print

here = Path(__file__).resolve().parent.parent / "circuits"
for name in ("yanking.ptc", "circle.ptc", "interchange.ptc", "phase_gate.ptc"):
    f = parse((here / name).read_text())
    p = evaluate(f)
    print(f"--- {name}: {p.dom} -> {p.cod}")
    print(pretty_print(f), end="")
    if p.is_number:
        print("value:", p.value.real)

src = "system A = classical(2)\nmain = id(A).copy(A)"
try:
    parse(src)
except Exception as e:
    print("type error reported as:", e)

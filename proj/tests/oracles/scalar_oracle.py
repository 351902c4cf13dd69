"""Independent sympy oracle for frozen scalar expectations used in test_scalar.cpp."""
import sympy as sp

x, y, z = sp.symbols("x y z")

def show(e):
    return str(sp.factor(sp.cancel(e))).replace("**", "^")

cases = {
    "gcd1": sp.gcd(sp.expand((x + y) ** 2 * (x - 2 * z)), sp.expand((x + y) * (x * z - 1) * (x - 2 * z))),
    "gcd2": sp.gcd(sp.expand((x**2 * y + 3) * (y - z) ** 2), sp.expand((x**2 * y + 3) * (y + z))),
    "gcd3": sp.gcd(sp.expand((2 * x * y - 1) * (x + 1)), sp.expand((2 * x * y - 1) * (y + 1))),
    "cancel1": sp.cancel((x**3 - y**3) / (x**2 - y**2)),
    "diff1": sp.diff((x**2 + y) / (x * y - 1), x),
    "diff2": sp.diff((x * z) / (y**2 + z), z),
    "sum1": sp.cancel(1 / (x + y) + 1 / (x - y)),
    "sum2": sp.cancel(x / (x * y + 1) - y / (x * y + 1)),
    "prod1": sp.cancel((x**2 - 1) / (y + 1) * (y**2 - 1) / (x + 1)),
}
for k, v in cases.items():
    print(k, "=", show(v))

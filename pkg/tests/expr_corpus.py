"""A fixed corpus of univariate smooth expressions with in-domain base
points, used by the derivative-law tests.  Base points are chosen away
from zeros of the first derivative so that relative-tolerance
comparisons stay meaningful."""

CORPUS = [
    ("t^2", [-2.0, 0.5, 3.0]),
    ("t^3 - 2*t + 1", [-1.5, 0.25, 2.0]),
    ("1/2*t^4 - t^2 + 3", [1.7, -2.3, 0.9]),
    ("t^5 - t^4 + t^3 - t^2 + t - 1", [0.8, -0.6, 1.4]),
    ("(1 + t)^5", [0.3, -0.4, 1.1]),
    ("(t^2 + 1)^3", [0.7, -1.2, 1.6]),
    ("7*t", [0.0, -3.0, 12.5]),
    ("t^3/6 + t^2/2", [0.9, -1.8, 2.4]),
    ("sin(t)", [0.0, 0.7, -1.3]),
    ("cos(t)", [0.6, -1.1, 2.0]),
    ("exp(t)", [0.0, 1.0, -0.5]),
    ("log(t)", [1.0, 2.0, 0.3]),
    ("sqrt(t)", [1.0, 4.0, 0.25]),
    ("sin(t^2)", [0.5, 1.1, -0.8]),
    ("exp(-t^2)", [0.5, -0.8, 1.3]),
    ("t*sin(t)", [0.9, 2.2, -1.4]),
    ("sin(t)*cos(t)", [0.4, 1.0, -0.3]),
    ("exp(t)*cos(t)", [0.0, 0.9, -1.2]),
    ("log(1 + t^2)", [0.8, -1.5, 2.1]),
    ("sqrt(1 + t^2)", [0.6, -1.9, 3.0]),
    ("1/(1 + t^2)", [0.7, -1.1, 1.8]),
    ("t/(1 + t^2)", [0.2, 1.6, -2.4]),
    ("(1 - t)^-1", [0.0, 0.5, -0.5]),
    ("exp(sin(t))", [0.3, 1.2, -0.9]),
    ("sin(exp(t))", [0.0, -1.0, 0.4]),
    ("log(exp(t) + 1)", [0.0, 1.5, -2.0]),
    ("sqrt(exp(t))", [0.0, 0.8, -1.6]),
    ("cos(t)^2", [0.4, 1.0, -0.7]),
    ("sin(t)^3 + cos(t)^3", [0.37, 0.81, -0.53]),
    ("t^2*exp(t)", [0.5, 1.3, -2.2]),
    ("exp(t)/(1 + t^2)", [0.6, -0.4, 1.9]),
    ("sin(t)/(2 + cos(t))", [0.5, 1.4, -1.0]),
    ("log(2 + sin(t))", [0.0, 0.9, -1.7]),
    ("sqrt(4 + t^2)", [0.8, -1.3, 2.6]),
    ("cos(2*t + 1)", [0.2, -0.9, 1.1]),
    ("t^3*log(1 + t^2)", [0.9, -1.4, 2.0]),
]

# expressions whose lift at rational points stays exact (polynomials and
# rational functions with nonvanishing denominators at the bases)
EXACT_SUBSET = [text for text, _ in CORPUS[:8]] + ["1/(1 + t^2)", "t/(1 + t^2)"]

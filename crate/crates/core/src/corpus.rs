//! Germs exercised by the self-test and the regression suites.

/// `(name, expression)` pairs. All are reduced and of degree at most 12.
pub const CORPUS: &[(&str, &str)] = &[
    ("A1", "x^2 + y^2"),
    ("cusp", "x^2 + y^3"),
    ("A5", "x^2 + y^6"),
    ("E6", "x^3 + y^4"),
    ("E8", "x^3 + y^5"),
    ("E7", "x^3 + x*y^3"),
    ("D5", "x^2*y + y^4"),
    ("D4", "x^3 - x*y^4"),
    ("x3y12", "x^3 + y^12"),
    ("x3y12 deformed", "x^3 + y^12 + x^2*y^5"),
    ("quartic", "z^4 + z^2*w^2 + w^4"),
    ("Fermat quartic", "z^4 + w^4"),
    ("two cusps", "x^4 - 3*x^2*y^3 + 2*y^6"),
    ("W12", "x^4 + y^5 + x^2*y^3"),
    ("sheared", "y^3 + x^5"),
    ("gaussian", "x^3 + i*x*y^4 + y^6"),
];

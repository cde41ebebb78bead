use hardy_core::{Complex64, PoleTerm, RationalSymbol};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Soliton parameters `(C, p)` used by the traveling-wave and Lax checks.
pub fn soliton_corpus() -> Vec<(Complex64, Complex64)> {
    vec![
        (c(1.0, 0.0), c(0.0, -1.0)),
        (c(2.0, 0.0), c(0.0, -1.0)),
        (c(0.0, 1.0), c(3.0, -1.0)),
        (c(0.6, -0.8), c(-5.0, -1.5)),
        (c(1.5, 0.5), c(2.0, -2.0)),
    ]
}

/// One symbol of each degree `1..=5`.
pub fn rational_corpus() -> Vec<RationalSymbol> {
    let terms = vec![
        vec![PoleTerm::new(c(0.0, -1.0), vec![c(1.0, 0.0)])],
        vec![PoleTerm::new(c(0.0, -1.0), vec![c(1.0, 0.0)]), PoleTerm::new(c(0.0, -2.0), vec![c(-1.0, 0.0)])],
        vec![
            PoleTerm::new(c(-2.0, -1.0), vec![c(1.0, 0.0)]),
            PoleTerm::new(c(1.0, -1.5), vec![c(0.0, 1.0), c(0.5, 0.0)]),
        ],
        vec![
            PoleTerm::new(c(-3.0, -1.0), vec![c(1.0, 0.0)]),
            PoleTerm::new(c(0.0, -1.0), vec![c(0.5, 0.5)]),
            PoleTerm::new(c(3.0, -1.0), vec![c(0.0, -1.0)]),
            PoleTerm::new(c(0.0, -2.5), vec![c(1.0, 0.0)]),
        ],
        vec![
            PoleTerm::new(c(-4.0, -1.0), vec![c(1.0, 0.0)]),
            PoleTerm::new(c(-1.0, -1.5), vec![c(0.0, 1.0), c(0.3, 0.0)]),
            PoleTerm::new(c(2.0, -1.0), vec![c(-0.7, 0.2)]),
            PoleTerm::new(c(4.0, -2.0), vec![c(0.8, 0.0)]),
        ],
    ];
    terms.into_iter().map(|t| RationalSymbol::new(t).expect("corpus symbols are valid")).collect()
}

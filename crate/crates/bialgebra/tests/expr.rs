use bialgebra::expr::{EvalError, Expr, ParseErrorKind};
use proptest::prelude::*;

const DIM: usize = 3;

/// Test-side expression tree with its own printer and evaluator.
#[derive(Debug, Clone)]
enum T {
    Num(f64),
    Var(usize),
    Add(Box<T>, Box<T>),
    Sub(Box<T>, Box<T>),
    Mul(Box<T>, Box<T>),
    /// `a / (1.5 + sin(b))`
    Div(Box<T>, Box<T>),
    Neg(Box<T>),
    Pow(Box<T>, i32),
    Sin(Box<T>),
    Cos(Box<T>),
    /// `exp(sin(a))`
    Exp(Box<T>),
    /// `log(1 + a^2)`
    Log(Box<T>),
    /// `sqrt(1 + a^2)`
    Sqrt(Box<T>),
}

impl T {
    fn text(&self) -> String {
        match self {
            T::Num(c) => format!("({c})"),
            T::Var(i) => format!("x{}", i + 1),
            T::Add(a, b) => format!("({} + {})", a.text(), b.text()),
            T::Sub(a, b) => format!("({} - {})", a.text(), b.text()),
            T::Mul(a, b) => format!("({} * {})", a.text(), b.text()),
            T::Div(a, b) => format!("({} / (1.5 + sin({})))", a.text(), b.text()),
            T::Neg(a) => format!("(-{})", a.text()),
            T::Pow(a, k) => format!("({})^{k}", a.text()),
            T::Sin(a) => format!("sin({})", a.text()),
            T::Cos(a) => format!("cos({})", a.text()),
            T::Exp(a) => format!("exp(sin({}))", a.text()),
            T::Log(a) => format!("log(1 + ({})^2)", a.text()),
            T::Sqrt(a) => format!("sqrt(1 + ({})^2)", a.text()),
        }
    }

    fn eval(&self, p: &[f64]) -> f64 {
        match self {
            T::Num(c) => *c,
            T::Var(i) => p[*i],
            T::Add(a, b) => a.eval(p) + b.eval(p),
            T::Sub(a, b) => a.eval(p) - b.eval(p),
            T::Mul(a, b) => a.eval(p) * b.eval(p),
            T::Div(a, b) => a.eval(p) / (1.5 + b.eval(p).sin()),
            T::Neg(a) => -a.eval(p),
            T::Pow(a, k) => a.eval(p).powi(*k),
            T::Sin(a) => a.eval(p).sin(),
            T::Cos(a) => a.eval(p).cos(),
            T::Exp(a) => a.eval(p).sin().exp(),
            T::Log(a) => (1.0 + a.eval(p).powi(2)).ln(),
            T::Sqrt(a) => (1.0 + a.eval(p).powi(2)).sqrt(),
        }
    }
}

fn tree() -> impl Strategy<Value = T> {
    let leaf = prop_oneof![(-3.0f64..3.0).prop_map(T::Num), (0..DIM).prop_map(T::Var)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let b = |t: T| Box::new(t);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| T::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| T::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| T::Mul(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| T::Div(b(x), b(y))),
            inner.clone().prop_map(move |x| T::Neg(b(x))),
            (inner.clone(), 0i32..4).prop_map(move |(x, k)| T::Pow(b(x), k)),
            inner.clone().prop_map(move |x| T::Sin(b(x))),
            inner.clone().prop_map(move |x| T::Cos(b(x))),
            inner.clone().prop_map(move |x| T::Exp(b(x))),
            inner.clone().prop_map(move |x| T::Log(b(x))),
            inner.prop_map(move |x| T::Sqrt(b(x))),
        ]
    })
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5f64..1.5, DIM)
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn documented_examples() {
    let e = Expr::parse("x1*x1 + sin(x2)", 2).unwrap();
    assert_eq!(e.eval(&[2.0, 0.0]).unwrap(), 4.0);
    let err = Expr::parse("1/(x1", 2).unwrap_err();
    assert_eq!(err.offset, 6);
    let s = Expr::parse("sin(x2)^2", 2).unwrap();
    assert!((s.eval(&[0.0, std::f64::consts::FRAC_PI_2]).unwrap() - 1.0).abs() < 1e-15);
    let sq = Expr::parse("x1*x1", 1).unwrap().diff(0);
    assert_eq!(sq.eval(&[1.75]).unwrap(), 3.5);
    assert!(Expr::parse("7.5", 1).unwrap().diff(0).is_zero());
}

#[test]
fn unknown_names_are_rejected() {
    assert!(matches!(
        Expr::parse("x4", 3).unwrap_err().kind,
        ParseErrorKind::UnknownVariable(_)
    ));
    assert!(matches!(
        Expr::parse("cosh(x1)", 3).unwrap_err().kind,
        ParseErrorKind::UnknownFunction(_)
    ));
}

#[test]
fn domain_errors() {
    let e = Expr::parse("sqrt(x1 - 1)", 1).unwrap();
    assert!(matches!(e.eval(&[0.0]), Err(EvalError::Domain { .. })));
    assert!(matches!(e.eval(&[]), Err(EvalError::PointDimension { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_matches_tree_oracle(t in tree(), p in point()) {
        let e = Expr::parse(&t.text(), DIM).unwrap();
        prop_assert!(near(e.eval(&p).unwrap(), t.eval(&p), 1e-12), "{}", t.text());
    }

    #[test]
    fn derivative_matches_central_difference(t in tree(), p in point(), k in 0..DIM) {
        let e = Expr::parse(&t.text(), DIM).unwrap();
        let h = 1e-5;
        let shift = |s: f64| {
            let mut q = p.clone();
            q[k] += s;
            e.eval(&q).unwrap()
        };
        let fd = (shift(h) - shift(-h)) / (2.0 * h);
        let exact = e.diff(k).eval(&p).unwrap();
        let scale = 1.0 + e.eval(&p).unwrap().abs();
        prop_assert!((exact - fd).abs() <= 1e-6 * scale.max(exact.abs()), "{} d/dx{}: {exact} vs {fd}", t.text(), k + 1);
    }

    #[test]
    fn derivative_is_linear_and_leibniz(a in tree(), b in tree(), c in -2.0f64..2.0, p in point(), k in 0..DIM) {
        let (ea, eb) = (Expr::parse(&a.text(), DIM).unwrap(), Expr::parse(&b.text(), DIM).unwrap());
        let (va, vb) = (ea.eval(&p).unwrap(), eb.eval(&p).unwrap());
        let (da, db) = (ea.diff(k).eval(&p).unwrap(), eb.diff(k).eval(&p).unwrap());
        let lin = ea.add(&eb.mul(&Expr::num(c))).diff(k).eval(&p).unwrap();
        prop_assert!(near(lin, da + c * db, 1e-10));
        let prod = ea.mul(&eb).diff(k).eval(&p).unwrap();
        prop_assert!(near(prod, da * vb + va * db, 1e-10));
    }

    #[test]
    fn printing_is_a_fixed_point(t in tree()) {
        let once = Expr::parse(&t.text(), DIM).unwrap();
        let twice = Expr::parse(&once.to_string(), DIM).unwrap();
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(twice.to_string(), once.to_string());
    }
}

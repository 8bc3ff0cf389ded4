use thiserror::Error;

use super::ast::{AngleExpr, Axis, BinaryOp, PulseEvent, PulseSequence, Spins, Symbol};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("parameter `{}` is not bound", .0.name())]
    Unbound(Symbol),
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("expression `{0}` is not finite")]
    NonFinite(String),
    #[error("invalid binding: {0}")]
    InvalidBinding(String),
}

/// Values for the free parameters `n` and `J` (Hz).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bindings<T> {
    pub n: Option<i64>,
    pub j_hz: Option<T>,
}

impl<T: Real> Bindings<T> {
    pub fn new() -> Self {
        Self {
            n: None,
            j_hz: None,
        }
    }

    pub fn with_n(mut self, n: i64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_j(mut self, j_hz: T) -> Self {
        self.j_hz = Some(j_hz);
        self
    }

    fn j(&self) -> Result<T, EvalError> {
        let j = self.j_hz.ok_or(EvalError::Unbound(Symbol::J))?;
        if j > T::zero() && j.is_finite() {
            Ok(j)
        } else {
            Err(EvalError::InvalidBinding(format!(
                "J must be positive, got {j}"
            )))
        }
    }
}

impl AngleExpr {
    pub fn evaluate<T: Real>(&self, bindings: &Bindings<T>) -> Result<T, EvalError> {
        let value = match self {
            AngleExpr::Number(x) => T::lit(*x),
            AngleExpr::Symbol(Symbol::Pi) => T::pi(),
            AngleExpr::Symbol(Symbol::N) => {
                let n = bindings.n.ok_or(EvalError::Unbound(Symbol::N))?;
                T::from_i64(n).ok_or_else(|| EvalError::InvalidBinding(format!("n = {n}")))?
            }
            AngleExpr::Symbol(Symbol::J) => bindings.j()?,
            AngleExpr::Neg(e) => -e.evaluate(bindings)?,
            AngleExpr::Binary(op, l, r) => {
                let a = l.evaluate(bindings)?;
                let b = r.evaluate(bindings)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == T::zero() {
                            return Err(EvalError::DivisionByZero(self.to_string()));
                        }
                        a / b
                    }
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite(self.to_string()))
        }
    }
}

/// A pulse event with every parameter reduced to a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConcreteEvent<T> {
    Rf { axis: Axis, spins: Spins, angle: T },
    GradientCrush,
    Delay { seconds: T },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConcreteSequence<T> {
    pub events: Vec<ConcreteEvent<T>>,
}

impl<T: Real> ConcreteSequence<T> {
    pub fn total_delay(&self) -> T {
        self.events
            .iter()
            .map(|e| match e {
                ConcreteEvent::Delay { seconds } => *seconds,
                _ => T::zero(),
            })
            .fold(T::zero(), |a, b| a + b)
    }
}

/// Binds parameters and reduces every angle and duration to a number.
/// `tau` becomes a delay of `1/(2J)` seconds.
pub fn evaluate<T: Real>(
    seq: &PulseSequence,
    bindings: &Bindings<T>,
) -> Result<ConcreteSequence<T>, EvalError> {
    let events = seq
        .events
        .iter()
        .map(|event| {
            Ok(match event {
                PulseEvent::Rf { axis, spins, angle } => ConcreteEvent::Rf {
                    axis: *axis,
                    spins: *spins,
                    angle: angle.evaluate(bindings)?,
                },
                PulseEvent::GradientCrush => ConcreteEvent::GradientCrush,
                PulseEvent::Delay(d) => {
                    let seconds = d.evaluate(bindings)?;
                    if seconds < T::zero() {
                        return Err(EvalError::InvalidBinding(format!(
                            "delay `{d}` evaluates to {seconds} s"
                        )));
                    }
                    ConcreteEvent::Delay { seconds }
                }
                PulseEvent::Tau => ConcreteEvent::Delay {
                    seconds: T::one() / (T::lit(2.0) * bindings.j()?),
                },
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(ConcreteSequence { events })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn eval_text(text: &str, b: Bindings<f64>) -> Result<Vec<ConcreteEvent<f64>>, EvalError> {
        evaluate(&parse(text).unwrap(), &b).map(|s| s.events)
    }

    #[test]
    fn parametric_angle() {
        let ev = eval_text("Rx2(n*pi/6)", Bindings::new().with_n(5)).unwrap();
        let ConcreteEvent::Rf { angle, .. } = ev[0] else {
            panic!()
        };
        assert_relative_eq!(angle, 5.0 * PI / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn tau_is_half_inverse_coupling() {
        let ev = eval_text("tau", Bindings::new().with_j(215.0)).unwrap();
        assert_eq!(
            ev,
            vec![ConcreteEvent::Delay {
                seconds: 1.0 / 430.0
            }]
        );
        assert_relative_eq!(1.0 / 430.0, 2.3256e-3, max_relative = 1e-4);
    }

    #[test]
    fn echo_halves() {
        let ev = eval_text(
            "d(n/(12*J)) - Rx12(pi) - d(n/(12*J))",
            Bindings::new().with_n(6).with_j(215.0),
        )
        .unwrap();
        assert_eq!(ev.len(), 3);
        for i in [0, 2] {
            let ConcreteEvent::Delay { seconds } = ev[i] else {
                panic!()
            };
            assert_relative_eq!(seconds, 6.0 / 2580.0, max_relative = 1e-15);
        }
        assert!(
            matches!(ev[1], ConcreteEvent::Rf { axis: Axis::X, spins: Spins::Both, angle } if angle == PI)
        );
    }

    #[test]
    fn evaluation_errors() {
        assert_eq!(
            eval_text("Rx1(n)", Bindings::new()),
            Err(EvalError::Unbound(Symbol::N))
        );
        assert_eq!(
            eval_text("tau", Bindings::new()),
            Err(EvalError::Unbound(Symbol::J))
        );
        assert!(matches!(
            eval_text("Rx1(pi/(n - 2))", Bindings::new().with_n(2)),
            Err(EvalError::DivisionByZero(_))
        ));
        assert!(matches!(
            eval_text("tau", Bindings::new().with_j(-1.0)),
            Err(EvalError::InvalidBinding(_))
        ));
        assert!(matches!(
            eval_text("d(-1)", Bindings::new()),
            Err(EvalError::InvalidBinding(_))
        ));
        let huge = format!("Rx1({0}*{0})", "1".repeat(200));
        assert!(matches!(
            eval_text(&huge, Bindings::new()),
            Err(EvalError::NonFinite(_))
        ));
    }
}

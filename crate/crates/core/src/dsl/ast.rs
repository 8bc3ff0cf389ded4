use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Pi,
    /// Experiment index.
    N,
    /// Scalar coupling constant in Hz.
    J,
}

impl Symbol {
    pub fn name(self) -> &'static str {
        match self {
            Symbol::Pi => "pi",
            Symbol::N => "n",
            Symbol::J => "J",
        }
    }

    pub(crate) fn from_name(s: &str) -> Option<Self> {
        match s {
            "pi" => Some(Symbol::Pi),
            "n" => Some(Symbol::N),
            "J" => Some(Symbol::J),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => " + ",
            BinaryOp::Sub => " - ",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }
}

/// Arithmetic over literals, `pi`, `n` and `J`. Used for rotation angles
/// (radians) and delay durations (seconds).
#[derive(Debug, Clone, PartialEq)]
pub enum AngleExpr {
    /// Non-negative literal; negation is always an explicit [`AngleExpr::Neg`].
    Number(f64),
    Symbol(Symbol),
    Neg(Box<AngleExpr>),
    Binary(BinaryOp, Box<AngleExpr>, Box<AngleExpr>),
}

impl AngleExpr {
    pub fn number(x: f64) -> Self {
        if x < 0.0 {
            AngleExpr::Neg(Box::new(AngleExpr::Number(-x)))
        } else {
            AngleExpr::Number(x)
        }
    }

    pub fn symbol(s: Symbol) -> Self {
        AngleExpr::Symbol(s)
    }

    pub fn binary(op: BinaryOp, lhs: AngleExpr, rhs: AngleExpr) -> Self {
        AngleExpr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: AngleExpr) -> Self {
        AngleExpr::Neg(Box::new(inner))
    }

    /// Replaces every occurrence of `symbol` by `value`.
    pub fn substitute(&self, symbol: Symbol, value: &AngleExpr) -> AngleExpr {
        match self {
            AngleExpr::Symbol(s) if *s == symbol => value.clone(),
            AngleExpr::Number(_) | AngleExpr::Symbol(_) => self.clone(),
            AngleExpr::Neg(e) => AngleExpr::neg(e.substitute(symbol, value)),
            AngleExpr::Binary(op, l, r) => AngleExpr::binary(
                *op,
                l.substitute(symbol, value),
                r.substitute(symbol, value),
            ),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            AngleExpr::Binary(op, ..) => op.precedence(),
            AngleExpr::Neg(_) => 3,
            AngleExpr::Number(_) | AngleExpr::Symbol(_) => 4,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &AngleExpr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for AngleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleExpr::Number(x) => write!(f, "{x}"),
            AngleExpr::Symbol(s) => f.write_str(s.name()),
            AngleExpr::Neg(e) => {
                f.write_str("-")?;
                write_operand(f, e, e.precedence() < 3)
            }
            AngleExpr::Binary(op, l, r) => {
                // left-associative: equal precedence on the right needs parens
                write_operand(f, l, l.precedence() < op.precedence())?;
                f.write_str(op.symbol())?;
                write_operand(f, r, r.precedence() <= op.precedence())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn letter(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// Which spins an RF pulse addresses. Spin 1 is the proton (most significant
/// qubit), spin 2 the carbon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spins {
    First,
    Second,
    Both,
}

impl Spins {
    pub fn label(self) -> &'static str {
        match self {
            Spins::First => "1",
            Spins::Second => "2",
            Spins::Both => "12",
        }
    }

    pub fn includes_first(self) -> bool {
        matches!(self, Spins::First | Spins::Both)
    }

    pub fn includes_second(self) -> bool {
        matches!(self, Spins::Second | Spins::Both)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PulseEvent {
    Rf {
        axis: Axis,
        spins: Spins,
        angle: AngleExpr,
    },
    /// Pulsed field gradient; removes all coherences.
    GradientCrush,
    /// Free evolution for a duration in seconds.
    Delay(AngleExpr),
    /// Free evolution for `1/(2J)`.
    Tau,
}

impl PulseEvent {
    pub fn rf(axis: Axis, spins: Spins, angle: AngleExpr) -> Self {
        PulseEvent::Rf { axis, spins, angle }
    }
}

impl fmt::Display for PulseEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseEvent::Rf { axis, spins, angle } => {
                write!(f, "R{}{}({angle})", axis.letter(), spins.label())
            }
            PulseEvent::GradientCrush => f.write_str("Gz"),
            PulseEvent::Delay(d) => write!(f, "d({d})"),
            PulseEvent::Tau => f.write_str("tau"),
        }
    }
}

/// Events in execution order, optionally named.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    pub name: Option<String>,
    pub events: Vec<PulseEvent>,
}

impl PulseSequence {
    pub fn new(events: Vec<PulseEvent>) -> Self {
        Self { name: None, events }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PulseEvent> {
        self.events.iter()
    }

    pub fn substitute(&self, symbol: Symbol, value: &AngleExpr) -> Self {
        let events = self
            .events
            .iter()
            .map(|e| match e {
                PulseEvent::Rf { axis, spins, angle } => {
                    PulseEvent::rf(*axis, *spins, angle.substitute(symbol, value))
                }
                PulseEvent::Delay(d) => PulseEvent::Delay(d.substitute(symbol, value)),
                other => other.clone(),
            })
            .collect();
        Self {
            name: self.name.clone(),
            events,
        }
    }
}

/// Canonical text of a sequence; a name becomes a leading `# name:` comment.
pub fn render(seq: &PulseSequence) -> String {
    let mut out = String::new();
    if let Some(name) = &seq.name {
        out.push_str("# name: ");
        out.push_str(name);
        out.push('\n');
    }
    let body: Vec<String> = seq.events.iter().map(ToString::to_string).collect();
    out.push_str(&body.join(" - "));
    out
}

impl fmt::Display for PulseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

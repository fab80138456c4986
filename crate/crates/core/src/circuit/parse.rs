use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::analyzer::{Engine, Selector};
use crate::classical::{BitWord, MAX_WORD_WIDTH};
use crate::ensemble::Multiplicity;
use crate::error::{Error, Result};
use crate::heisenberg::{QuantumGate, VALIDATION_TOLERANCE};
use crate::linalg::{Matrix, C64};

use super::{
    AnalysisKind, AnalysisRequest, CircuitDocument, Expectation, InitialCondition, LawChoice, RENORMALIZE_THRESHOLD,
};

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

fn is_break(c: char) -> bool {
    c.is_whitespace() || c == ';'
}

impl<'a> Cursor<'a> {
    fn column(&self, at: usize) -> usize {
        self.text[..at].chars().count() + 1
    }

    fn token_at(&self, at: usize) -> String {
        let rest = &self.text[at..];
        let end = rest.find(is_break).unwrap_or(rest.len());
        if end == 0 {
            if rest.is_empty() {
                "end of line".into()
            } else {
                rest[..1].into()
            }
        } else {
            rest[..end].into()
        }
    }

    fn error(&self, at: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column(at),
            token: self.token_at(at),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(self.pos, format!("expected `{c}`")))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let end = rest.find(|c: char| !f(c)).unwrap_or(rest.len());
        self.pos += end;
        (start, &rest[..end])
    }

    fn ident(&mut self) -> Result<(usize, &'a str)> {
        let (at, s) = self.take_while(|c| c.is_ascii_alphabetic() || c == '_');
        if s.is_empty() {
            Err(self.error(at, "expected a keyword"))
        } else {
            Ok((at, s))
        }
    }

    /// Reads `name=` and returns `name` with its position.
    fn key(&mut self) -> Result<(usize, &'a str)> {
        let (at, k) = self.take_while(|c| c.is_ascii_alphabetic());
        if k.is_empty() || !self.text[self.pos..].starts_with('=') {
            return Err(self.error(at, "expected `key=value`"));
        }
        self.pos += 1;
        Ok((at, k))
    }

    fn uint(&mut self) -> Result<(usize, usize)> {
        let (at, s) = self.take_while(|c| c.is_ascii_digit());
        if s.is_empty() {
            return Err(self.error(at, "expected a number"));
        }
        s.parse().map(|v| (at, v)).map_err(|_| self.error(at, "number too large"))
    }

    fn bigint(&mut self) -> Result<(usize, BigInt)> {
        let (at, s) = self.take_while(|c| c.is_ascii_digit());
        if s.is_empty() {
            return Err(self.error(at, "expected a number"));
        }
        Ok((at, s.parse().expect("digits")))
    }

    fn float(&mut self) -> Result<f64> {
        let (at, s) = self.take_while(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(at, "expected a finite real number")),
        }
    }

    fn complex(&mut self) -> Result<C64> {
        self.expect('(')?;
        let re = self.float()?;
        self.expect(',')?;
        let im = self.float()?;
        self.expect(')')?;
        Ok(C64::new(re, im))
    }

    /// `0b0101` or a decimal number, below `2^width`.
    fn word(&mut self, width: usize) -> Result<(usize, u64)> {
        let (at, s) = self.take_while(|c| c.is_ascii_alphanumeric());
        let value = if let Some(bits) = s.strip_prefix("0b") {
            if bits.is_empty() || bits.len() > 64 {
                None
            } else {
                u64::from_str_radix(bits, 2).ok()
            }
        } else {
            s.parse::<u64>().ok()
        };
        let value = value.ok_or_else(|| self.error(at, "expected a state such as 0b011"))?;
        BitWord::new(value, width).map_err(|e| self.error(at, e.to_string()))?;
        Ok((at, value))
    }

    fn list<T>(&mut self, open: char, close: char, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    /// `rows=[[(re,im),...],...]` as a square matrix.
    fn rows(&mut self) -> Result<(usize, Matrix)> {
        let at = self.pos;
        let rows = self.list('[', ']', |c| c.list('[', ']', Cursor::complex))?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(self.error(at, "matrix rows must form a non-empty square"));
        }
        Ok((at, Matrix::from_fn(n, n, |i, j| rows[i][j])))
    }

    fn end_of_line(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(self.pos, "unexpected trailing input"))
        }
    }
}

struct Located<T> {
    line: usize,
    column: usize,
    token: String,
    value: T,
}

fn located<T>(c: &Cursor, at: usize, value: T) -> Located<T> {
    Located {
        line: c.line,
        column: c.column(at),
        token: c.token_at(at),
        value,
    }
}

fn fail<T, U>(at: &Located<T>, message: impl Into<String>) -> Result<U> {
    Err(Error::Parse {
        line: at.line,
        column: at.column,
        token: at.token.clone(),
        message: message.into(),
    })
}

fn unitary_check(c: &Cursor, at: usize, m: &Matrix, dim: usize) -> Result<()> {
    if m.nrows() != dim {
        return Err(c.error(at, format!("matrix is {}x{}, expected {dim}x{dim}", m.nrows(), m.nrows())));
    }
    let residual = crate::linalg::unitarity_residual(m);
    if residual > VALIDATION_TOLERANCE {
        return Err(c.error(at, Error::NotUnitary { residual }.to_string()));
    }
    Ok(())
}

fn parse_gate(c: &mut Cursor, width: usize, used: &mut HashSet<usize>, step: usize) -> Result<Located<QuantumGate>> {
    let (start, name) = c.ident()?;
    let indices = |c: &mut Cursor, count: usize| -> Result<Vec<(usize, usize)>> {
        (0..count).map(|_| c.uint()).collect()
    };
    let mut qubit_positions: Vec<(usize, usize)>;
    let gate = match name {
        "toffoli" => {
            qubit_positions = indices(c, 3)?;
            let q: Vec<usize> = qubit_positions.iter().map(|p| p.1).collect();
            QuantumGate::Toffoli(q[0], q[1], q[2])
        }
        "cnot" => {
            qubit_positions = indices(c, 2)?;
            QuantumGate::CNot(qubit_positions[0].1, qubit_positions[1].1)
        }
        "swap" => {
            qubit_positions = indices(c, 2)?;
            QuantumGate::Swap(qubit_positions[0].1, qubit_positions[1].1)
        }
        "not" => {
            qubit_positions = indices(c, 1)?;
            QuantumGate::Not(qubit_positions[0].1)
        }
        "delay" => {
            qubit_positions = indices(c, 1)?;
            let mut phase = 0.0;
            if c.peek().is_some_and(|ch| ch.is_ascii_alphabetic()) {
                let (at, k) = c.key()?;
                if k != "phase" {
                    return Err(c.error(at, "expected `phase=`"));
                }
                phase = c.float()?;
            }
            QuantumGate::Delay {
                qubit: qubit_positions[0].1,
                phase,
            }
        }
        "unitary" => {
            let (at, k) = c.key()?;
            if k != "q" {
                return Err(c.error(at, "expected `q=[...]`"));
            }
            qubit_positions = c.list('[', ']', Cursor::uint)?;
            if qubit_positions.is_empty() || qubit_positions.len() > width {
                return Err(c.error(at, "unitary gate needs between 1 and N qubits"));
            }
            let (at, k) = c.key()?;
            if k != "rows" {
                return Err(c.error(at, "expected `rows=[...]`"));
            }
            let (at, matrix) = c.rows()?;
            unitary_check(c, at, &matrix, 1 << qubit_positions.len())?;
            QuantumGate::Unitary {
                qubits: qubit_positions.iter().map(|p| p.1).collect(),
                matrix,
            }
        }
        "cond" => {
            if width < 2 {
                return Err(c.error(start, "conditional gate needs at least 2 qubits"));
            }
            let (at, k) = c.key()?;
            if k != "control" {
                return Err(c.error(at, "expected `control=`"));
            }
            let (cat, control) = c.uint()?;
            let (at, k) = c.key()?;
            if k != "f" {
                return Err(c.error(at, "expected `f=perm(...)`"));
            }
            let (fat, kw) = c.ident()?;
            if kw != "perm" {
                return Err(c.error(fat, "expected `perm(...)`"));
            }
            let f: Vec<u64> = c.list('(', ')', Cursor::uint)?.into_iter().map(|p| p.1 as u64).collect();
            let sub = 1usize << (width - 1);
            if f.len() != sub {
                return Err(c.error(fat, format!("permutation has {} entries, expected {sub}", f.len())));
            }
            if let Err(e) = crate::classical::invert_table(&f) {
                return Err(c.error(fat, e.to_string()));
            }
            let (at, k) = c.key()?;
            if k != "U" || !c.text[c.pos..].starts_with("rows=") {
                return Err(c.error(at, "expected `U=rows=[...]`"));
            }
            c.key()?;
            let (at, u) = c.rows()?;
            unitary_check(c, at, &u, sub)?;
            qubit_positions = vec![(cat, control)];
            qubit_positions.extend((1..=width).filter(|&k| k != control).map(|k| (start, k)));
            QuantumGate::Conditional { control, f, u }
        }
        _ => return Err(c.error(start, "unknown gate")),
    };
    let mut seen = HashSet::new();
    for &(at, q) in &qubit_positions {
        if q == 0 || q > width {
            return Err(c.error(at, Error::IndexOutOfRange { index: q, width }.to_string()));
        }
        if !seen.insert(q) {
            return Err(c.error(at, Error::RepeatedIndex { index: q }.to_string()));
        }
    }
    for &(at, q) in &qubit_positions {
        if !used.insert(q) {
            return Err(c.error(at, Error::OverlappingGates { step, index: q }.to_string()));
        }
    }
    Ok(located(c, start, gate))
}

fn parse_expectation(c: &mut Cursor, at: usize, slot: &mut Option<Expectation>) -> Result<()> {
    if slot.is_some() {
        return Err(c.error(at, "repeated `expect=`"));
    }
    let (vat, v) = c.ident()?;
    *slot = Some(match v {
        "pass" => Expectation::Pass,
        "fail" => Expectation::Fail,
        _ => return Err(c.error(vat, "expected `pass` or `fail`")),
    });
    Ok(())
}

fn parse_analysis(c: &mut Cursor, width: usize) -> Result<AnalysisRequest> {
    let (at, name) = c.ident()?;
    let mut expect = None;
    let mut selector = None;
    let mut law = None;
    let mut monitor = None;
    while !c.at_end() {
        let (kat, key) = c.key()?;
        match (name, key) {
            (_, "expect") => parse_expectation(c, kat, &mut expect)?,
            ("autonomy", "selector") if selector.is_none() => {
                let (sat, s) = c.take_while(|ch| !ch.is_whitespace());
                let sel = s
                    .parse::<Selector>()
                    .map_err(|m| c.error(sat, m))?
                    .resolve(width);
                sel.validate(width).map_err(|e| c.error(sat, e.to_string()))?;
                selector = Some(sel);
            }
            ("autonomy", "law") if law.is_none() => {
                let (lat, l) = c.ident()?;
                law = Some(match l {
                    "classical" => LawChoice::Classical,
                    "algebra" => LawChoice::Algebra,
                    _ => return Err(c.error(lat, "expected `classical` or `algebra`")),
                });
            }
            ("robustness", "monitor") if monitor.is_none() => {
                let mut list: Vec<usize> = Vec::new();
                if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                    loop {
                        let (qat, q) = c.uint()?;
                        if q == 0 || q > width {
                            return Err(c.error(qat, Error::IndexOutOfRange { index: q, width }.to_string()));
                        }
                        if list.contains(&q) {
                            return Err(c.error(qat, Error::RepeatedIndex { index: q }.to_string()));
                        }
                        list.push(q);
                        if !c.text[c.pos..].starts_with(',') {
                            break;
                        }
                        c.pos += 1;
                    }
                }
                monitor = Some(list);
            }
            _ => return Err(c.error(kat, format!("unexpected option for `{name}`"))),
        }
    }
    let kind = match name {
        "correspondence" => AnalysisKind::Correspondence,
        "autonomy" => AnalysisKind::Autonomy {
            selector: selector.ok_or_else(|| c.error(at, "autonomy needs `selector=`"))?,
            law,
        },
        "robustness" => AnalysisKind::Robustness {
            monitor: monitor.ok_or_else(|| c.error(at, "robustness needs `monitor=`"))?,
        },
        _ => return Err(c.error(at, "unknown analysis")),
    };
    Ok(AnalysisRequest { kind, expect })
}

fn parse_init(c: &mut Cursor, width: usize, warnings: &mut Vec<String>) -> Result<InitialCondition> {
    let (at, kind) = c.ident()?;
    let mut seen = HashSet::new();
    let mut word = |c: &mut Cursor| -> Result<u64> {
        let (wat, b) = c.word(width)?;
        if !seen.insert(b) {
            return Err(c.error(wat, "state listed twice"));
        }
        if !c.text[c.pos..].starts_with(':') {
            return Err(c.error(c.pos, "expected `:`"));
        }
        c.pos += 1;
        Ok(b)
    };
    let init = match kind {
        "basis" => {
            let (_, b) = c.word(width)?;
            InitialCondition::Basis(BitWord::new(b, width)?)
        }
        "ensemble" => {
            let mut entries = Vec::new();
            while !c.at_end() {
                let b = word(c)?;
                let (mat, num) = c.bigint()?;
                let den = if c.text[c.pos..].starts_with('/') {
                    c.pos += 1;
                    c.bigint()?.1
                } else {
                    BigInt::from(1)
                };
                if num.is_zero() || den.is_zero() {
                    return Err(c.error(mat, "multiplicity must be a positive rational"));
                }
                entries.push((b, Multiplicity::new(num, den)));
            }
            if entries.is_empty() {
                return Err(c.error(c.pos, "ensemble needs at least one state"));
            }
            InitialCondition::Ensemble(entries)
        }
        "state" => {
            let mut entries = Vec::new();
            while !c.at_end() {
                let b = word(c)?;
                entries.push((b, c.complex()?));
            }
            let norm = entries.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(c.error(at, "amplitudes are all zero"));
            }
            if (norm - 1.0).abs() > RENORMALIZE_THRESHOLD {
                warnings.push(format!("line {}: amplitudes had norm {norm}; normalized", c.line));
                for (_, a) in &mut entries {
                    *a /= norm;
                }
            }
            InitialCondition::State(entries)
        }
        _ => return Err(c.error(at, "expected `basis`, `ensemble` or `state`")),
    };
    c.end_of_line()?;
    Ok(init)
}

/// Parses a circuit document. Errors carry line, column and token.
pub fn parse(text: &str) -> Result<CircuitDocument> {
    let mut width: Option<usize> = None;
    let mut engines: Option<Located<Vec<(usize, Engine)>>> = None;
    let mut engine_cursor_line = String::new();
    let mut init: Option<Located<InitialCondition>> = None;
    let mut steps: Vec<Vec<Located<QuantumGate>>> = Vec::new();
    let mut analyses = Vec::new();
    let mut warnings = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        last_line = i + 1;
        let mut c = Cursor {
            line: i + 1,
            text: line,
            pos: 0,
        };
        if c.at_end() {
            continue;
        }
        let (at, kw) = c.ident()?;
        if kw != "qubits" && width.is_none() {
            return Err(c.error(at, "the first line must be `qubits N`"));
        }
        match kw {
            "qubits" => {
                if width.is_some() {
                    return Err(c.error(at, "repeated `qubits` line"));
                }
                let (nat, n) = c.uint()?;
                if n == 0 || n > MAX_WORD_WIDTH {
                    return Err(c.error(nat, format!("width must be between 1 and {MAX_WORD_WIDTH}")));
                }
                c.end_of_line()?;
                width = Some(n);
            }
            "engine" => {
                if engines.is_some() {
                    return Err(c.error(at, "repeated `engine` line"));
                }
                let mut list = Vec::new();
                while !c.at_end() {
                    let (eat, name) = c.ident()?;
                    let e: Engine = name.parse().map_err(|m: String| c.error(eat, m))?;
                    if list.iter().any(|&(_, x)| x == e) {
                        return Err(c.error(eat, "engine listed twice"));
                    }
                    list.push((eat, e));
                }
                if list.is_empty() {
                    return Err(c.error(c.pos, "expected at least one engine"));
                }
                engine_cursor_line = line.to_string();
                engines = Some(located(&c, at, list));
            }
            "init" => {
                if init.is_some() {
                    return Err(c.error(at, "repeated `init` line"));
                }
                let value = parse_init(&mut c, width.unwrap(), &mut warnings)?;
                init = Some(located(&c, at, value));
            }
            "step" => {
                let mut used = HashSet::new();
                let mut gates = Vec::new();
                if !c.at_end() {
                    loop {
                        gates.push(parse_gate(&mut c, width.unwrap(), &mut used, steps.len())?);
                        if c.at_end() {
                            break;
                        }
                        c.expect(';')?;
                    }
                }
                steps.push(gates);
            }
            "analyze" => {
                analyses.push(parse_analysis(&mut c, width.unwrap())?);
            }
            _ => return Err(c.error(at, "unknown directive")),
        }
    }

    let end = |message: &str| Error::Parse {
        line: last_line + 1,
        column: 1,
        token: "end of input".into(),
        message: message.into(),
    };
    let width = width.ok_or_else(|| end("missing `qubits` line"))?;
    let init = init.ok_or_else(|| end("missing `init` line"))?;

    let requested: Vec<(Option<usize>, Engine)> = match &engines {
        Some(l) => l.value.iter().map(|&(at, e)| (Some(at), e)).collect(),
        None => vec![(None, init.value.default_engine())],
    };
    for &(at, e) in &requested {
        let compatible = matches!(
            (e, &init.value),
            (Engine::Quantum, _)
                | (Engine::Classical, InitialCondition::Basis(_))
                | (Engine::Ensemble, InitialCondition::Basis(_) | InitialCondition::Ensemble(_))
        );
        if !compatible {
            let message = format!("the {e} engine cannot start from this initial condition");
            return match at {
                Some(at) => Err(Cursor {
                    line: engines.as_ref().unwrap().line,
                    text: &engine_cursor_line,
                    pos: 0,
                }
                .error(at, message)),
                None => fail(&init, message),
            };
        }
        if e != Engine::Quantum {
            for gates in &steps {
                if let Some(g) = gates.iter().find(|g| g.value.classical_analogue().is_none()) {
                    return fail(g, format!("gate has no classical analogue, required by the {e} engine"));
                }
            }
        }
    }

    Ok(CircuitDocument {
        width,
        engines: engines.map(|l| l.value.into_iter().map(|(_, e)| e).collect()),
        init: init.value,
        steps: steps
            .into_iter()
            .map(|gates| gates.into_iter().map(|g| g.value).collect())
            .collect(),
        analyses,
        warnings,
    })
}

//! Minimal model of the LP text format for mixed-integer programs, with a
//! writer and a reader that round-trip each other's output exactly.
//!
//! Supported sections: `Maximize`/`Minimize`, `Subject To`, `Bounds`,
//! `Binaries`, `Generals`, `End`. Lines starting with `\` are comments.

use std::fmt::{self, Write as _};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing objective section")]
    MissingObjective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub var: String,
}

impl Term {
    pub fn new(coef: f64, var: impl Into<String>) -> Self {
        Term { coef, var: var.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<Term>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    Range { var: String, lower: f64, upper: f64 },
    Fixed { var: String, value: f64 },
    Upper { var: String, upper: f64 },
    Lower { var: String, lower: f64 },
    Free { var: String },
}

impl Bound {
    pub fn var(&self) -> &str {
        match self {
            Bound::Range { var, .. }
            | Bound::Fixed { var, .. }
            | Bound::Upper { var, .. }
            | Bound::Lower { var, .. }
            | Bound::Free { var } => var,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub name: Option<String>,
    pub sense: Sense,
    pub objective_name: String,
    pub objective: Vec<Term>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
    pub binaries: Vec<String>,
    pub generals: Vec<String>,
}

impl LpModel {
    pub fn new(sense: Sense) -> Self {
        LpModel {
            name: None,
            sense,
            objective_name: "obj".into(),
            objective: Vec::new(),
            constraints: Vec::new(),
            bounds: Vec::new(),
            binaries: Vec::new(),
            generals: Vec::new(),
        }
    }

    /// Distinct variable names in order of first appearance.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = std::collections::HashSet::new();
        let names = self
            .objective
            .iter()
            .map(|t| t.var.as_str())
            .chain(self.constraints.iter().flat_map(|c| c.terms.iter().map(|t| t.var.as_str())))
            .chain(self.bounds.iter().map(Bound::var))
            .chain(self.binaries.iter().map(String::as_str))
            .chain(self.generals.iter().map(String::as_str));
        names.filter(|n| seen.insert(*n)).collect()
    }

    pub fn to_lp_string(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "\\ Problem name: {name}");
        }
        out.push_str(match self.sense {
            Sense::Maximize => "Maximize\n",
            Sense::Minimize => "Minimize\n",
        });
        let _ = writeln!(out, " {}: {}", self.objective_name, expression(&self.objective));
        out.push_str("Subject To\n");
        for c in &self.constraints {
            let _ = writeln!(out, " {}: {} {} {}", c.name, expression(&c.terms), c.relation, c.rhs);
        }
        if !self.bounds.is_empty() {
            out.push_str("Bounds\n");
            for b in &self.bounds {
                let _ = match b {
                    Bound::Range { var, lower, upper } => writeln!(out, " {lower} <= {var} <= {upper}"),
                    Bound::Fixed { var, value } => writeln!(out, " {var} = {value}"),
                    Bound::Upper { var, upper } => writeln!(out, " {var} <= {upper}"),
                    Bound::Lower { var, lower } => writeln!(out, " {var} >= {lower}"),
                    Bound::Free { var } => writeln!(out, " {var} free"),
                };
            }
        }
        for (title, vars) in [("Binaries", &self.binaries), ("Generals", &self.generals)] {
            if !vars.is_empty() {
                let _ = writeln!(out, "{title}");
                for v in vars {
                    let _ = writeln!(out, " {v}");
                }
            }
        }
        out.push_str("End\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self, LpError> {
        Parser::default().run(text)
    }
}

fn expression(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let (sign, mag) = if t.coef < 0.0 || (t.coef == 0.0 && t.coef.is_sign_negative()) {
            ("-", -t.coef)
        } else {
            ("+", t.coef)
        };
        if i == 0 {
            if sign == "-" {
                out.push_str("- ");
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag == 1.0 {
            out.push_str(&t.var);
        } else {
            let _ = write!(out, "{mag} {}", t.var);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Name(String),
    Sign(f64),
    Colon,
    Rel(Relation),
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>, LpError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Sign(1.0));
                i += 1;
            }
            '-' => {
                tokens.push(Token::Sign(-1.0));
                i += 1;
            }
            ':' => {
                tokens.push(Token::Colon);
                i += 1;
            }
            '<' | '>' | '=' => {
                let rel = match c {
                    '<' => Relation::Le,
                    '>' => Relation::Ge,
                    _ => Relation::Eq,
                };
                i += 1;
                if c != '=' && chars.get(i) == Some(&'=') {
                    i += 1;
                }
                tokens.push(Token::Rel(rel));
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                // exponent
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse::<f64>().map_err(|_| LpError::Parse {
                    line: lineno,
                    msg: format!("bad number `{s}`"),
                })?;
                tokens.push(Token::Num(v));
            }
            _ => {
                let start = i;
                while i < chars.len() && !matches!(chars[i], ' ' | '\t' | '+' | '-' | ':' | '<' | '>' | '=') {
                    i += 1;
                }
                tokens.push(Token::Name(chars[start..i].iter().collect()));
            }
        }
    }
    Ok(tokens)
}

/// Reads `[sign] [coef] name` terms until a relation or the end.
fn parse_terms(tokens: &[Token], lineno: usize) -> Result<(Vec<Term>, usize), LpError> {
    let err = |msg: &str| LpError::Parse {
        line: lineno,
        msg: msg.to_string(),
    };
    let mut terms = Vec::new();
    let mut i = 0;
    // a lone `0` stands for the empty expression
    if let [Token::Num(v), rest @ ..] = tokens {
        if *v == 0.0 && !matches!(rest.first(), Some(Token::Name(_))) {
            return Ok((terms, 1));
        }
    }
    while i < tokens.len() && !matches!(tokens[i], Token::Rel(_)) {
        let mut sign = 1.0;
        if let Token::Sign(s) = tokens[i] {
            sign = s;
            i += 1;
        }
        let mut coef = 1.0;
        if let Some(Token::Num(v)) = tokens.get(i) {
            coef = *v;
            i += 1;
        }
        match tokens.get(i) {
            Some(Token::Name(n)) => terms.push(Term::new(sign * coef, n.clone())),
            _ => return Err(err("expected a variable name")),
        }
        i += 1;
    }
    Ok((terms, i))
}

#[derive(Default)]
struct Parser {
    model: Option<LpModel>,
    name: Option<String>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Generals,
    End,
}

impl Parser {
    fn run(mut self, text: &str) -> Result<LpModel, LpError> {
        let mut section = Section::Preamble;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('\\') {
                if let Some(name) = comment.trim().strip_prefix("Problem name:") {
                    self.name = Some(name.trim().to_string());
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let keyword = line.to_ascii_lowercase();
            let next = match keyword.as_str() {
                "maximize" | "maximise" | "max" => {
                    self.start(Sense::Maximize);
                    Some(Section::Objective)
                }
                "minimize" | "minimise" | "min" => {
                    self.start(Sense::Minimize);
                    Some(Section::Objective)
                }
                "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
                "bounds" => Some(Section::Bounds),
                "binaries" | "binary" | "bin" => Some(Section::Binaries),
                "generals" | "general" | "gen" => Some(Section::Generals),
                "end" => Some(Section::End),
                _ => None,
            };
            if let Some(s) = next {
                section = s;
                continue;
            }
            let model = self.model.as_mut().ok_or(LpError::MissingObjective)?;
            let tokens = tokenize(line, lineno)?;
            let err = |msg: &str| LpError::Parse {
                line: lineno,
                msg: msg.to_string(),
            };
            match section {
                Section::Preamble | Section::End => return Err(err("text outside a section")),
                Section::Objective => {
                    let (name, body) = split_label(&tokens);
                    if let Some(name) = name {
                        model.objective_name = name;
                    }
                    let (terms, used) = parse_terms(body, lineno)?;
                    if used != body.len() {
                        return Err(err("unexpected relation in objective"));
                    }
                    model.objective.extend(terms);
                }
                Section::Constraints => {
                    let (name, body) = split_label(&tokens);
                    let name = name.unwrap_or_else(|| format!("c{}", model.constraints.len() + 1));
                    let (terms, used) = parse_terms(body, lineno)?;
                    let (relation, rhs) = match &body[used..] {
                        [Token::Rel(r), Token::Num(v)] => (*r, *v),
                        [Token::Rel(r), Token::Sign(s), Token::Num(v)] => (*r, s * v),
                        _ => return Err(err("expected `<relation> <number>`")),
                    };
                    model.constraints.push(Constraint {
                        name,
                        terms,
                        relation,
                        rhs,
                    });
                }
                Section::Bounds => model.bounds.push(parse_bound(&tokens).ok_or_else(|| err("bad bound"))?),
                Section::Binaries | Section::Generals => {
                    for t in tokens {
                        let Token::Name(n) = t else {
                            return Err(err("expected variable names"));
                        };
                        if section == Section::Binaries {
                            model.binaries.push(n);
                        } else {
                            model.generals.push(n);
                        }
                    }
                }
            }
        }
        let mut model = self.model.ok_or(LpError::MissingObjective)?;
        model.name = self.name;
        Ok(model)
    }

    fn start(&mut self, sense: Sense) {
        self.model = Some(LpModel::new(sense));
    }
}

fn split_label(tokens: &[Token]) -> (Option<String>, &[Token]) {
    match tokens {
        [Token::Name(n), Token::Colon, rest @ ..] => (Some(n.clone()), rest),
        _ => (None, tokens),
    }
}

fn signed(tokens: &[Token]) -> Option<(f64, &[Token])> {
    match tokens {
        [Token::Num(v), rest @ ..] => Some((*v, rest)),
        [Token::Sign(s), Token::Num(v), rest @ ..] => Some((s * v, rest)),
        [Token::Sign(s), Token::Name(n), rest @ ..] if n.eq_ignore_ascii_case("inf") || n.eq_ignore_ascii_case("infinity") => {
            Some((s * f64::INFINITY, rest))
        }
        _ => None,
    }
}

fn parse_bound(tokens: &[Token]) -> Option<Bound> {
    if let [Token::Name(var), Token::Name(kw)] = tokens {
        if kw.eq_ignore_ascii_case("free") {
            return Some(Bound::Free { var: var.clone() });
        }
    }
    if let Some((lower, rest)) = signed(tokens) {
        return match rest {
            [Token::Rel(Relation::Le), Token::Name(var), Token::Rel(Relation::Le), tail @ ..] => {
                let (upper, end) = signed(tail)?;
                end.is_empty().then(|| Bound::Range {
                    var: var.clone(),
                    lower,
                    upper,
                })
            }
            [Token::Rel(Relation::Le), Token::Name(var)] => Some(Bound::Lower { var: var.clone(), lower }),
            _ => None,
        };
    }
    let [Token::Name(var), Token::Rel(rel), tail @ ..] = tokens else {
        return None;
    };
    let (value, end) = signed(tail)?;
    if !end.is_empty() {
        return None;
    }
    let var = var.clone();
    Some(match rel {
        Relation::Le => Bound::Upper { var, upper: value },
        Relation::Ge => Bound::Lower { var, lower: value },
        Relation::Eq => Bound::Fixed { var, value },
    })
}

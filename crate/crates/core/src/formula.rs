//! CNF formulas and DIMACS input/output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::Var;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var.index());
        if self.positive {
            v
        } else {
            -v
        }
    }
}

/// A non-tautological, non-empty clause. Literals are sorted by variable and
/// no variable occurs twice.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Clause {
    literals: Vec<Literal>,
    index: usize,
}

impl Clause {
    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    /// Position of the clause in the original input.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.literals.iter().map(|l| l.var)
    }

    /// The unique assignment of the clause's variables (in sorted variable
    /// order) that falsifies it.
    pub fn falsifier(&self) -> Vec<u32> {
        self.literals
            .iter()
            .map(|l| u32::from(!l.positive))
            .collect()
    }

    pub fn is_satisfied_by(&self, value: impl Fn(Var) -> bool) -> bool {
        self.literals.iter().any(|l| value(l.var) == l.positive)
    }
}

/// Outcome of normalizing a raw clause.
enum RawClause {
    Stored(Vec<Literal>),
    Tautology,
    Empty,
}

fn normalize(raw: &[Literal]) -> RawClause {
    if raw.is_empty() {
        return RawClause::Empty;
    }
    let mut by_var: BTreeMap<Var, bool> = BTreeMap::new();
    for lit in raw {
        if let Some(&prev) = by_var.get(&lit.var) {
            if prev != lit.positive {
                return RawClause::Tautology;
            }
        }
        by_var.insert(lit.var, lit.positive);
    }
    RawClause::Stored(
        by_var
            .into_iter()
            .map(|(v, p)| Literal::new(v, p))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    declared_var_count: u32,
    clauses: Vec<Clause>,
    // kept only so that serialization reproduces the input
    tautologies: Vec<(usize, Vec<Literal>)>,
    empty_clauses: Vec<usize>,
    warnings: Vec<String>,
}

impl CnfFormula {
    pub fn new(declared_var_count: u32) -> Self {
        CnfFormula {
            declared_var_count,
            clauses: Vec::new(),
            tautologies: Vec::new(),
            empty_clauses: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Builds a formula from clauses given as DIMACS integers.
    pub fn from_clauses(declared_var_count: u32, clauses: &[Vec<i64>]) -> Result<Self> {
        let mut f = CnfFormula::new(declared_var_count);
        for (i, clause) in clauses.iter().enumerate() {
            let lits = clause
                .iter()
                .map(|&l| f.literal_from_dimacs(l, i + 1))
                .collect::<Result<Vec<_>>>()?;
            f.add_clause(&lits)?;
        }
        Ok(f)
    }

    fn literal_from_dimacs(&self, lit: i64, line: usize) -> Result<Literal> {
        let idx = lit.unsigned_abs();
        if idx == 0 || idx > u64::from(self.declared_var_count) {
            return Err(Error::parse(
                line,
                format!("literal {lit} out of range 1..={}", self.declared_var_count),
            ));
        }
        Ok(Literal::new(Var::new(idx as u32), lit > 0))
    }

    /// Appends a clause, applying duplicate merging and tautology/empty
    /// accounting.
    pub fn add_clause(&mut self, literals: &[Literal]) -> Result<()> {
        if let Some(l) = literals
            .iter()
            .find(|l| l.var.index() > self.declared_var_count)
        {
            return Err(Error::Precondition(format!(
                "variable {} exceeds declared count {}",
                l.var, self.declared_var_count
            )));
        }
        let index = self.header_clause_count();
        match normalize(literals) {
            RawClause::Stored(literals) => self.clauses.push(Clause { literals, index }),
            RawClause::Tautology => self.tautologies.push((index, literals.to_vec())),
            RawClause::Empty => self.empty_clauses.push(index),
        }
        Ok(())
    }

    pub fn declared_var_count(&self) -> u32 {
        self.declared_var_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn tautology_count(&self) -> usize {
        self.tautologies.len()
    }

    pub fn empty_clause_count(&self) -> usize {
        self.empty_clauses.len()
    }

    /// Number of clauses in the input, including removed ones.
    pub fn header_clause_count(&self) -> usize {
        self.clauses.len() + self.tautologies.len() + self.empty_clauses.len()
    }

    /// Non-fatal issues found while parsing, such as a clause count that
    /// disagrees with the header.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Variables that occur in some stored clause.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }

    pub fn isolated_variables(&self) -> usize {
        self.declared_var_count as usize - self.vars().len()
    }

    pub fn hypergraph(&self) -> Hypergraph {
        let edges = self.clauses.iter().map(|c| c.vars().collect::<Vec<_>>());
        Hypergraph::from_edges(edges).expect("stored clauses are non-empty")
    }

    pub fn is_monotone(&self) -> bool {
        self.clauses
            .iter()
            .all(|c| c.literals.iter().all(|l| l.positive))
    }

    /// DIMACS text, every clause in original input order. Tautologies and
    /// empty clauses are written back as they were read.
    pub fn to_dimacs(&self) -> String {
        let mut lines: Vec<(usize, String)> = Vec::with_capacity(self.header_clause_count());
        let render = |lits: &[Literal]| {
            let mut s = String::new();
            for l in lits {
                let _ = write!(s, "{} ", l.to_dimacs());
            }
            s.push('0');
            s
        };
        lines.extend(self.clauses.iter().map(|c| (c.index, render(&c.literals))));
        lines.extend(self.tautologies.iter().map(|(i, l)| (*i, render(l))));
        lines.extend(self.empty_clauses.iter().map(|&i| (i, "0".to_string())));
        lines.sort_by_key(|(i, _)| *i);

        let mut out = format!("p cnf {} {}\n", self.declared_var_count, lines.len());
        for (_, line) in lines {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Hypergraph of a formula: one edge per distinct clause variable set.
pub fn formula_hypergraph(f: &CnfFormula) -> Hypergraph {
    f.hypergraph()
}

pub fn isolated_variables(f: &CnfFormula) -> usize {
    f.isolated_variables()
}

/// Parses DIMACS CNF. Clauses may span lines; a line starting with `%` ends
/// the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut formula: Option<CnfFormula> = None;
    let mut header_clauses = 0usize;
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0usize;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if formula.is_some() {
                return Err(Error::parse(lineno, "duplicate header"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(Error::parse(
                    lineno,
                    format!("malformed header {trimmed:?}, expected `p cnf <nvars> <nclauses>`"),
                ));
            }
            let nvars: u32 = fields[2]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad variable count {:?}", fields[2])))?;
            header_clauses = fields[3]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad clause count {:?}", fields[3])))?;
            formula = Some(CnfFormula::new(nvars));
            continue;
        }
        let f = formula
            .as_mut()
            .ok_or_else(|| Error::parse(lineno, "clause before `p cnf` header"))?;
        for token in trimmed.split_whitespace() {
            let lit: i64 = token
                .parse()
                .map_err(|_| Error::parse(lineno, format!("non-integer token {token:?}")))?;
            if lit == 0 {
                f.add_clause(&pending)
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
                pending.clear();
            } else {
                if pending.is_empty() {
                    pending_line = lineno;
                }
                pending.push(f.literal_from_dimacs(lit, lineno)?);
            }
        }
    }

    let mut f = formula
        .ok_or_else(|| Error::parse(text.lines().count().max(1), "missing `p cnf` header"))?;
    if !pending.is_empty() {
        return Err(Error::parse(
            pending_line,
            "clause not terminated by 0 at end of input",
        ));
    }
    if f.header_clause_count() != header_clauses {
        f.warnings.push(format!(
            "header declares {header_clauses} clauses but {} were read",
            f.header_clause_count()
        ));
    }
    Ok(f)
}

pub fn parse_dimacs_reader(mut reader: impl Read) -> Result<CnfFormula> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::parse(0, format!("read error: {e}")))?;
    parse_dimacs(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(c: &Clause) -> Vec<i64> {
        c.literals().iter().map(|l| l.to_dimacs()).collect()
    }

    #[test]
    fn parses_simple_clause() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f.declared_var_count(), 2);
        assert_eq!(f.clauses().len(), 1);
        assert_eq!(lits(&f.clauses()[0]), vec![1, -2]);
        assert!(f.warnings().is_empty());
    }

    #[test]
    fn removes_tautology() {
        let f = parse_dimacs("p cnf 1 1\n1 -1 0").unwrap();
        assert!(f.clauses().is_empty());
        assert_eq!(f.tautology_count(), 1);
    }

    #[test]
    fn merges_duplicates_and_counts_empty() {
        let f = parse_dimacs("p cnf 3 2\n1 1 2 0\n0").unwrap();
        assert_eq!(f.clauses().len(), 1);
        assert_eq!(lits(&f.clauses()[0]), vec![1, 2]);
        assert_eq!(f.empty_clause_count(), 1);
    }

    #[test]
    fn clauses_may_span_lines_and_comments() {
        let f = parse_dimacs("c hello\np cnf 3 2\n1 2\n3 0 -1\nc mid\n0\n").unwrap();
        assert_eq!(f.clauses().len(), 2);
        assert_eq!(lits(&f.clauses()[0]), vec![1, 2, 3]);
        assert_eq!(lits(&f.clauses()[1]), vec![-1]);
    }

    #[test]
    fn header_count_mismatch_is_a_warning() {
        let f = parse_dimacs("p cnf 2 5\n1 0\n").unwrap();
        assert_eq!(f.warnings().len(), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("p cnf x 1\n1 0", 1),
            ("p dnf 1 1\n1 0", 1),
            ("p cnf 2 1\n1 3 0", 2),
            ("p cnf 2 2\n1 0\n2 a 0", 3),
            ("p cnf 2 1\n1 0\n2", 3),
            ("1 0", 1),
            ("p cnf 1 1\np cnf 1 1\n", 2),
        ];
        for (text, line) in cases {
            match parse_dimacs(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(parse_dimacs("c only comments\n").is_err());
    }

    #[test]
    fn hypergraph_uses_set_semantics() {
        let f = parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0").unwrap();
        let h = f.hypergraph();
        assert_eq!(h.edges().count(), 2);

        let f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0").unwrap();
        assert_eq!(f.hypergraph().edges().count(), 1);

        let f = parse_dimacs("p cnf 0 0\n").unwrap();
        assert!(f.hypergraph().is_empty());
    }

    #[test]
    fn isolated_variable_accounting() {
        assert_eq!(
            parse_dimacs("p cnf 5 1\n1 0").unwrap().isolated_variables(),
            4
        );
        assert_eq!(parse_dimacs("p cnf 3 0\n").unwrap().isolated_variables(), 3);
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 2 0")
                .unwrap()
                .isolated_variables(),
            0
        );
        // tautologies do not make their variables occur
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 -1 0")
                .unwrap()
                .isolated_variables(),
            2
        );
    }

    #[test]
    fn serializer_keeps_original_order() {
        let text = "p cnf 3 4\n1 -1 0\n2 3 0\n0\n-3 0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(f.to_dimacs(), text);
    }
}

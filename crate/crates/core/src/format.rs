//! Line-oriented text formats for instances, allocations, LNES formulas and
//! assignments.
//!
//! Blank lines are ignored and `#` starts a comment. Goods are numbered from 1.
//!
//! ```text
//! pathfair-instance 1
//! kind goods
//! goods 4
//! agent alice additive 1 0 2 1
//! agent bob table
//! 1 1 2 3
//! 0 1 2
//! 1 2
//! 1
//! ```
//!
//! A `table` agent is followed by `m` rows; row `l` lists the values of
//! `[l,l]`, `[l,l+1]`, ..., `[l,m]`.
//!
//! ```text
//! pathfair-allocation 1
//! bundle bob 1-2
//! bundle alice 3-4
//! bundle carol EMPTY
//! ```
//!
//! Bundles are listed in path order; that order is the allocation's `σ`.
//!
//! ```text
//! p 2
//! p_1 r_1 q_2 s_2
//! q_1 s_1 p_2 r_2
//! ```
//!
//! An LNES file gives `p` and then one auxiliary clause per line. A leading
//! `-` negates a literal. An assignment file lists the variables set to true.

use std::fmt::Write as _;

use crate::allocation::{AgentOrder, Allocation, Interval};
use crate::model::{Agent, Instance, IntervalTable, Kind, Valuation};
use crate::reductions::{LnesAssignment, LnesInstance, RawLiteral, RawLnes, Var};

pub const INSTANCE_HEADER: &str = "pathfair-instance 1";
pub const ALLOCATION_HEADER: &str = "pathfair-allocation 1";

/// Parse failure. `line` is 1-based, or 0 when the whole document is at fault.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}{message}", if *.line > 0 { format!("line {}: ", .line) } else { String::new() })]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

type ParseResult<T> = Result<T, ParseError>;

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, word: &str, what: &str) -> ParseResult<T> {
    word.parse().map_err(|_| ParseError::new(line, format!("expected {what}, found {word:?}")))
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    header: &str,
) -> ParseResult<()> {
    match lines.next() {
        Some((_, words)) if words.join(" ") == header => Ok(()),
        Some((l, words)) => Err(ParseError::new(l, format!("expected header {header:?}, found {:?}", words.join(" ")))),
        None => Err(ParseError::new(0, "empty document")),
    }
}

pub fn parse_instance(text: &str) -> ParseResult<Instance> {
    let mut lines = content_lines(text).peekable();
    expect_header(&mut lines, INSTANCE_HEADER)?;
    let mut kind = None;
    let mut m = None;
    let mut agents = Vec::new();
    while let Some((l, words)) = lines.next() {
        match words[0] {
            "kind" if words.len() == 2 => {
                kind = Some(match words[1] {
                    "goods" => Kind::Goods,
                    "chores" => Kind::Chores,
                    other => return Err(ParseError::new(l, format!("unknown kind {other:?}"))),
                });
            }
            "goods" if words.len() == 2 => m = Some(parse_num::<usize>(l, words[1], "a number of goods")?),
            "agent" if words.len() >= 3 => {
                let m = m.ok_or_else(|| ParseError::new(l, "agent before the goods line"))?;
                let name = words[1].to_string();
                match words[2] {
                    "additive" => {
                        let values = words[3..]
                            .iter()
                            .map(|w| parse_num::<i64>(l, w, "an integer value"))
                            .collect::<ParseResult<Vec<_>>>()?;
                        if values.len() != m {
                            return Err(ParseError::new(
                                l,
                                format!("agent {name} lists {} values, expected {m}", values.len()),
                            ));
                        }
                        agents.push(Agent::additive(name, values));
                    }
                    "table" if words.len() == 3 => {
                        let mut rows = Vec::with_capacity(m);
                        for k in 0..m {
                            let (rl, row) = lines
                                .next()
                                .ok_or_else(|| ParseError::new(l, format!("table for {name} ends after {k} rows")))?;
                            let row = row
                                .iter()
                                .map(|w| parse_num::<i64>(rl, w, "an integer value"))
                                .collect::<ParseResult<Vec<_>>>()?;
                            if row.len() != m - k {
                                return Err(ParseError::new(
                                    rl,
                                    format!("table row {} has {} entries, expected {}", k + 1, row.len(), m - k),
                                ));
                            }
                            rows.push(row);
                        }
                        let table = IntervalTable::from_rows(rows).map_err(|e| ParseError::new(l, e.to_string()))?;
                        agents.push(Agent::table(name, table));
                    }
                    other => return Err(ParseError::new(l, format!("unknown valuation type {other:?}"))),
                }
            }
            _ => return Err(ParseError::new(l, format!("unrecognised line {:?}", words.join(" ")))),
        }
    }
    let kind = kind.ok_or_else(|| ParseError::new(0, "missing kind line"))?;
    let m = m.ok_or_else(|| ParseError::new(0, "missing goods line"))?;
    Instance::new(m, kind, agents).map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{INSTANCE_HEADER}").unwrap();
    writeln!(out, "kind {}", inst.kind()).unwrap();
    writeln!(out, "goods {}", inst.m()).unwrap();
    for agent in inst.agents() {
        match &agent.valuation {
            Valuation::Additive(vals) => {
                write!(out, "agent {} additive", agent.name).unwrap();
                for v in vals {
                    write!(out, " {v}").unwrap();
                }
                out.push('\n');
            }
            Valuation::IntervalTable(t) => {
                writeln!(out, "agent {} table", agent.name).unwrap();
                for row in t.rows() {
                    let row: Vec<String> = row.iter().map(i64::to_string).collect();
                    writeln!(out, "{}", row.join(" ")).unwrap();
                }
            }
        }
    }
    out
}

pub fn parse_allocation(text: &str, inst: &Instance) -> ParseResult<Allocation> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, ALLOCATION_HEADER)?;
    let n = inst.n();
    let mut order = Vec::with_capacity(n);
    let mut bundles = vec![None; n];
    for (l, words) in lines {
        if words.len() != 3 || words[0] != "bundle" {
            return Err(ParseError::new(l, format!("expected `bundle NAME l-r|EMPTY`, found {:?}", words.join(" "))));
        }
        let agent = inst
            .agent_index(words[1])
            .ok_or_else(|| ParseError::new(l, format!("unknown agent {:?}", words[1])))?;
        if order.contains(&agent) {
            return Err(ParseError::new(l, format!("agent {} listed twice", words[1])));
        }
        order.push(agent);
        if words[2] == "EMPTY" {
            continue;
        }
        let (a, b) = words[2]
            .split_once('-')
            .ok_or_else(|| ParseError::new(l, format!("expected a range l-r, found {:?}", words[2])))?;
        let first = parse_num::<usize>(l, a, "a good index")?;
        let last = parse_num::<usize>(l, b, "a good index")?;
        if first == 0 || last < first || last > inst.m() {
            return Err(ParseError::new(l, format!("range {first}-{last} is outside 1-{}", inst.m())));
        }
        bundles[agent] = Interval::from_one_based(first, last);
    }
    if order.len() != n {
        let missing: Vec<&str> = (0..n).filter(|a| !order.contains(a)).map(|a| inst.name(a)).collect();
        return Err(ParseError::new(0, format!("no bundle line for {}", missing.join(", "))));
    }
    let order = AgentOrder::new(order, n).map_err(|e| ParseError::new(0, e.to_string()))?;
    Allocation::new(order, bundles).map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn write_allocation(inst: &Instance, alloc: &Allocation) -> String {
    let mut out = String::new();
    writeln!(out, "{ALLOCATION_HEADER}").unwrap();
    for (a, bundle) in alloc.in_order() {
        match bundle {
            Some(iv) => writeln!(out, "bundle {} {}-{}", inst.name(a), iv.first(), iv.last()).unwrap(),
            None => writeln!(out, "bundle {} EMPTY", inst.name(a)).unwrap(),
        }
    }
    out
}

/// Raw clause data; run it through `validate_lnes` for the structural checks.
pub fn parse_lnes(text: &str) -> ParseResult<RawLnes> {
    let mut lines = content_lines(text);
    let p = match lines.next() {
        Some((l, words)) if words.len() == 2 && words[0] == "p" => parse_num::<usize>(l, words[1], "p")?,
        Some((l, _)) => return Err(ParseError::new(l, "expected `p N`")),
        None => return Err(ParseError::new(0, "empty document")),
    };
    let mut aux = Vec::new();
    for (l, words) in lines {
        let clause = words
            .iter()
            .map(|w| {
                let (positive, name) = match w.strip_prefix('-') {
                    Some(rest) => (false, rest),
                    None => (true, *w),
                };
                let var = name.parse::<Var>().map_err(|e| ParseError::new(l, e))?;
                Ok(RawLiteral { var, positive })
            })
            .collect::<ParseResult<Vec<_>>>()?;
        aux.push(clause);
    }
    Ok(RawLnes { p, aux })
}

pub fn write_lnes(lnes: &LnesInstance) -> String {
    let mut out = format!("p {}\n", lnes.p());
    for clause in lnes.aux_clauses() {
        let names: Vec<String> = clause.iter().map(|s| s.to_string()).collect();
        writeln!(out, "{}", names.join(" ")).unwrap();
    }
    out
}

pub fn parse_assignment(text: &str, p: usize) -> ParseResult<LnesAssignment> {
    let mut tau = LnesAssignment::all_false(p);
    for (l, words) in content_lines(text) {
        for w in words {
            let var = w.parse::<Var>().map_err(|e| ParseError::new(l, e))?;
            let index = match var {
                Var::Main(i) => i,
                Var::Shadow(s) => s.index,
            };
            if index >= p {
                return Err(ParseError::new(l, format!("variable {var} is out of range for p = {p}")));
            }
            tau.set(var, true);
        }
    }
    Ok(tau)
}

pub fn write_assignment(tau: &LnesAssignment) -> String {
    let names: Vec<String> = tau.true_vars().iter().map(Var::to_string).collect();
    format!("{}\n", names.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::validate_lnes;

    const MIXED: &str = "\
pathfair-instance 1
# two agents
kind goods
goods 3
agent alice additive 1 0 2
agent bob table
1 1 3
0 2
2
";

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(MIXED).unwrap();
        assert_eq!(inst.m(), 3);
        assert_eq!(inst.value(1, 0, 3), 3);
        assert_eq!(inst.value(1, 1, 2), 0);
        let text = write_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(write_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn instance_errors() {
        assert_eq!(parse_instance("").unwrap_err().line, 0);
        let e = parse_instance("pathfair-instance 1\nkind goods\ngoods 2\nagent a additive 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_instance("pathfair-instance 1\nkind goods\ngoods 2\nagent a additive 1 x\n").unwrap_err();
        assert!(e.to_string().starts_with("line 4:"));
        let e = parse_instance("pathfair-instance 1\nkind goods\ngoods 2\nagent a additive -1 0\n").unwrap_err();
        assert_eq!(e.line, 0);
    }

    #[test]
    fn allocation_round_trip() {
        let inst = parse_instance(MIXED).unwrap();
        let text = "pathfair-allocation 1\nbundle bob 1-2\nbundle alice 3-3\n";
        let a = parse_allocation(text, &inst).unwrap();
        assert_eq!(a.to_string(), "([1,2], [3,3])");
        assert_eq!(a.order().as_slice(), &[1, 0]);
        assert_eq!(write_allocation(&inst, &a), text);
    }

    #[test]
    fn allocation_errors() {
        let inst = parse_instance(MIXED).unwrap();
        for bad in [
            "pathfair-allocation 1\nbundle bob 1-2\n",
            "pathfair-allocation 1\nbundle bob 1-2\nbundle carol EMPTY\n",
            "pathfair-allocation 1\nbundle bob 1-4\nbundle alice EMPTY\n",
            "pathfair-allocation 1\nbundle bob 2-1\nbundle alice EMPTY\n",
            "bundle bob 1-2\nbundle alice EMPTY\n",
        ] {
            assert!(parse_allocation(bad, &inst).is_err(), "{bad}");
        }
    }

    #[test]
    fn lnes_round_trip() {
        let text = "p 2\np_1 r_1 q_2 s_2\nq_1 s_1 p_2 r_2\n";
        let lnes = validate_lnes(&parse_lnes(text).unwrap()).unwrap();
        assert_eq!(write_lnes(&lnes), text);
        let neg = parse_lnes("p 1\np_1 r_1 -q_1 s_1\n").unwrap();
        assert!(!neg.aux[0][2].positive);
        assert!(validate_lnes(&neg).is_err());
    }

    #[test]
    fn assignment_round_trip() {
        let tau = LnesAssignment::from_main(&[true, false]);
        let text = write_assignment(&tau);
        assert_eq!(text, "x_1 p_1 r_1 q_2 s_2\n");
        assert_eq!(parse_assignment(&text, 2).unwrap(), tau);
        assert!(parse_assignment("x_3", 2).is_err());
    }
}

//! Check reports: one JSON document per run, rendered as CSV or aligned text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::homology::BettiTable;
use crate::poly::Multidegree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The degree bound stopped short of the claimed support.
    Truncated,
    /// Some slice was too large for an exact method and a multi-prime comparison stood in.
    Heuristic,
}

impl Status {
    pub fn failed(self) -> bool {
        self == Status::Fail
    }

    /// Combines statuses: any failure wins, then truncation, then heuristic mode.
    pub fn and(self, o: Status) -> Status {
        use Status::*;
        match (self, o) {
            (Fail, _) | (_, Fail) => Fail,
            (Truncated, _) | (_, Truncated) => Truncated,
            (Heuristic, _) | (_, Heuristic) => Heuristic,
            _ => Pass,
        }
    }

    pub fn from_pass(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One value of a table. `degree` holds one component (single grading) or two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<Vec<i32>>,
    pub value: String,
}

impl Entry {
    pub fn new(label: &str, j: Option<i32>, degree: Option<Multidegree>, value: impl ToString) -> Self {
        Entry { label: label.into(), j, degree: degree.map(|d| d.components().to_vec()), value: value.to_string() }
    }

    fn key(&self) -> (String, Option<i32>, Option<Vec<i32>>) {
        (self.label.clone(), self.j, self.degree.clone())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tables {
    pub predicted: Vec<Entry>,
    pub computed: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub params: Value,
    pub seed: u64,
    pub primes: Vec<u32>,
    pub tables: Tables,
    pub status: Status,
    pub timing_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: &str, params: Value, seed: u64) -> Self {
        Report {
            check: check.into(),
            params,
            seed,
            primes: Vec::new(),
            tables: Tables::default(),
            status: Status::Pass,
            timing_ms: None,
            notes: Vec::new(),
        }
    }

    pub fn predicted(&mut self, e: Entry) {
        self.tables.predicted.push(e);
    }

    pub fn computed(&mut self, e: Entry) {
        self.tables.computed.push(e);
    }

    /// Records a predicted/computed pair and folds the comparison into the status.
    pub fn compare(&mut self, label: &str, j: Option<i32>, degree: Option<Multidegree>, predicted: impl ToString, computed: impl ToString) -> bool {
        let (p, c) = (predicted.to_string(), computed.to_string());
        let ok = p == c;
        self.predicted(Entry::new(label, j, degree, p));
        self.computed(Entry::new(label, j, degree, c));
        self.status = self.status.and(Status::from_pass(ok));
        ok
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// Everything one CLI invocation produced.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub reports: Vec<Report>,
}

impl ReportFile {
    pub fn status(&self) -> Status {
        self.reports.iter().fold(Status::Pass, |s, r| s.and(r.status))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Columns: check, label, j, degree (one or two columns), predicted, computed, status.
    pub fn to_csv(&self) -> String {
        let arity = self
            .reports
            .iter()
            .flat_map(|r| r.tables.computed.iter().chain(&r.tables.predicted))
            .filter_map(|e| e.degree.as_ref().map(|d| d.len()))
            .max()
            .unwrap_or(1);
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["check", "label", "j"];
        header.extend(if arity == 2 { &["degree_a", "degree_b"][..] } else { &["degree"][..] });
        header.extend(["predicted", "computed", "status"]);
        w.write_record(&header).expect("in-memory write");
        for r in &self.reports {
            for (key, p, c) in joined(&r.tables) {
                let mut rec = vec![r.check.clone(), key.0.clone(), key.1.map(|j| j.to_string()).unwrap_or_default()];
                let deg = key.2.clone().unwrap_or_default();
                rec.extend((0..arity).map(|k| deg.get(k).map(|x| x.to_string()).unwrap_or_default()));
                let status = match (&p, &c) {
                    (Some(p), Some(c)) if p == c => "pass",
                    (Some(_), Some(_)) => "fail",
                    _ => "",
                };
                rec.extend([p.unwrap_or_default(), c.unwrap_or_default(), status.to_string()]);
                w.write_record(&rec).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn to_text(&self) -> String {
        if self.reports.is_empty() {
            return "no checks run\n".into();
        }
        let mut out = String::new();
        for r in &self.reports {
            render_report(&mut out, r);
        }
        out
    }
}

type Key = (String, Option<i32>, Option<Vec<i32>>);

/// Predicted and computed entries matched by key, in computed order (prediction-only rows last).
fn joined(t: &Tables) -> Vec<(Key, Option<String>, Option<String>)> {
    let mut order: Vec<Key> = Vec::new();
    let mut map: BTreeMap<Key, (Option<String>, Option<String>)> = BTreeMap::new();
    for (e, predicted) in t.computed.iter().map(|e| (e, false)).chain(t.predicted.iter().map(|e| (e, true))) {
        let k = e.key();
        let slot = map.entry(k.clone()).or_insert_with(|| {
            order.push(k);
            (None, None)
        });
        if predicted {
            slot.0 = Some(e.value.clone());
        } else {
            slot.1 = Some(e.value.clone());
        }
    }
    order
        .into_iter()
        .map(|k| {
            let (p, c) = map.remove(&k).expect("key recorded");
            (k, p, c)
        })
        .collect()
}

type Row = (Key, Option<String>, Option<String>);

/// Renders agreeing single-graded `beta0`/`beta1` rows as Macaulay-style tables, one per
/// `j`, and returns the rows left for the generic layout.
fn take_betti(out: &mut String, rows: Vec<Row>) -> Vec<Row> {
    let is_betti = |r: &Row| matches!(r.0 .0.as_str(), "beta0" | "beta1");
    let betti: Vec<&Row> = rows.iter().filter(|r| is_betti(r)).collect();
    let single = betti.iter().all(|r| r.0 .2.as_ref().is_some_and(|d| d.len() == 1));
    let agree = betti.iter().all(|r| r.1.is_none() || r.1 == r.2);
    if betti.is_empty() || !single || !agree {
        return rows;
    }
    let mut tables: BTreeMap<Option<i32>, BettiTable> = BTreeMap::new();
    for ((label, j, deg), _, c) in &betti {
        let k = usize::from(label == "beta1");
        let m: usize = c.as_deref().and_then(|v| v.parse().ok()).unwrap_or(0);
        let d = Multidegree::single(deg.as_ref().expect("single")[0]);
        if m > 0 {
            tables.entry(*j).or_default().rows[k].insert(d, m);
        }
    }
    for (j, t) in &tables {
        let _ = writeln!(out, "  betti table{}", j.map(|j| format!(" (j = {j})")).unwrap_or_default());
        for line in render_betti(t).lines() {
            let _ = writeln!(out, "  {line}");
        }
    }
    rows.into_iter().filter(|r| !is_betti(r)).collect()
}

fn fmt_degree(d: &[i32]) -> String {
    match d {
        [a] => a.to_string(),
        _ => format!("({})", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Truncated => "truncated",
        Status::Heuristic => "heuristic",
    }
}

fn render_report(out: &mut String, r: &Report) {
    let _ = writeln!(out, "== {} [{}]  {}", r.check, status_word(r.status), r.params);
    let mut rows = joined(&r.tables);
    rows = take_betti(out, rows);
    // group rows by (label, j) in order of first appearance; single-graded groups
    // become a degree line and value lines
    let mut groups: Vec<((String, Option<i32>), Vec<(Option<Vec<i32>>, Option<String>, Option<String>)>)> = Vec::new();
    for ((label, j, deg), p, c) in rows {
        let key = (label, j);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push((deg, p, c)),
            None => groups.push((key, vec![(deg, p, c)])),
        }
    }
    for ((label, j), items) in groups {
        let title = match j {
            Some(j) => format!("{label} (j = {j})"),
            None => label.clone(),
        };
        let single = items.iter().all(|(d, _, _)| d.as_ref().is_some_and(|d| d.len() == 1));
        if single && items.len() > 1 {
            let _ = writeln!(out, "  {title}");
            let has_pred = items.iter().any(|i| i.1.is_some());
            let mut table = vec![std::iter::once("d:".to_string()).chain(items.iter().map(|i| fmt_degree(i.0.as_ref().unwrap()))).collect::<Vec<_>>()];
            if has_pred {
                table.push(std::iter::once("predicted:".to_string()).chain(items.iter().map(|i| i.1.clone().unwrap_or_default())).collect());
            }
            table.push(std::iter::once("dim:".to_string()).chain(items.iter().map(|i| i.2.clone().unwrap_or_default())).collect());
            write_aligned(out, &table);
        } else {
            let cells: Vec<String> = items
                .iter()
                .map(|(d, p, c)| {
                    let v = match (p, c) {
                        (Some(p), Some(c)) if p != c => format!("{c} (predicted {p})"),
                        (_, Some(c)) => c.clone(),
                        (Some(p), None) => format!("predicted {p}"),
                        (None, None) => String::new(),
                    };
                    match d {
                        Some(d) => format!("{}:{v}", fmt_degree(d)),
                        None => v,
                    }
                })
                .collect();
            let _ = writeln!(out, "  {title}: {}", cells.join(" "));
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    if let Some(t) = r.timing_ms {
        let _ = writeln!(out, "  time: {t} ms");
    }
}

fn write_aligned(out: &mut String, rows: &[Vec<String>]) {
    let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    for r in rows {
        let mut line = String::from("   ");
        for (c, cell) in r.iter().enumerate() {
            if c == 0 {
                let _ = write!(line, " {cell:<w$}", w = widths[0]);
            } else {
                let _ = write!(line, " {cell:>w$}", w = widths[c]);
            }
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
}

/// Macaulay-style Betti table of a singly graded presentation: row `r` holds
/// β_k in degree `r + k`, columns are `k = 0, 1`. Bigraded tables are listed as `(a,b):m`.
pub fn render_betti(t: &BettiTable) -> String {
    let single = t.rows.iter().flat_map(|r| r.keys()).all(|d| d.arity() == 1);
    let mut out = String::new();
    if !single {
        for (k, row) in t.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|(d, m)| format!("{d}:{m}")).collect();
            let _ = writeln!(out, "beta{k}: {}", cells.join(" "));
        }
        return out;
    }
    let mut by_row: BTreeMap<i32, [usize; 2]> = BTreeMap::new();
    for (k, row) in t.rows.iter().enumerate() {
        for (d, m) in row {
            by_row.entry(d.total() - k as i32).or_default()[k] += m;
        }
    }
    let totals = [t.rows[0].values().sum::<usize>(), t.rows[1].values().sum::<usize>()];
    let mut table = vec![vec![String::new(), "0".into(), "1".into()], vec!["total:".into(), totals[0].to_string(), totals[1].to_string()]];
    for (r, m) in by_row {
        let cell = |x: usize| if x == 0 { ".".to_string() } else { x.to_string() };
        table.push(vec![format!("{r}:"), cell(m[0]), cell(m[1])]);
    }
    write_aligned(&mut out, &table);
    out
}

//! Multiplicity posets of enumerative problems and weighted chain counts.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde_json::json;

use crate::covers::{covers, Condition, LrCache, Partition};
use crate::error::{Error, Result};
use crate::indexing::{dimension, enumerate_indices, Index, Space};

/// An enumerative problem: a space, an ordered list of condition classes, and a target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub space: Space,
    pub conditions: Vec<Condition>,
    pub target: Option<Index>,
}

impl ProblemSpec {
    pub fn new(space: Space, conditions: Vec<Condition>) -> Self {
        ProblemSpec { space, conditions, target: None }
    }

    pub fn with_target(mut self, target: Index) -> Self {
        self.target = Some(target);
        self
    }

    /// `copies` simple conditions on `OG(n)`, `LG(n)`, or the same class repeated on `Gr(k,n)`.
    pub fn repeated(space: Space, condition: Condition, copies: usize) -> Self {
        ProblemSpec::new(space, vec![condition; copies])
    }

    pub fn total_codimension(&self) -> usize {
        self.conditions.iter().map(Condition::codimension).sum()
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        for c in &self.conditions {
            c.check(&self.space)?;
        }
        let total = self.total_codimension();
        let dim = self.space.dimension()?;
        if total > dim {
            return Err(Error::Spec(format!(
                "conditions have total codimension {total}, more than dim {} = {dim}",
                self.space
            )));
        }
        if let Some(t) = &self.target {
            if !self.space.contains(t) {
                return Err(Error::Shape(format!("target {t} does not belong to {}", self.space)));
            }
            if dimension(t) != total {
                return Err(Error::Spec(format!(
                    "target {t} has dimension {}, but the conditions have total codimension {total}",
                    dimension(t)
                )));
            }
        }
        Ok(())
    }

    /// The target of the problem: the given one, else the top class when the
    /// conditions fill the space, else none (every reachable node is kept).
    pub fn resolved_target(&self) -> Result<Option<Index>> {
        if let Some(t) = &self.target {
            return Ok(Some(t.clone()));
        }
        if self.total_codimension() == self.space.dimension()? {
            return Ok(Some(self.space.top()?));
        }
        Ok(None)
    }
}

/// A labeled, weighted cover `from -> to` used by condition `stage` (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: Index,
    pub to: Index,
    pub stage: usize,
    pub multiplicity: u64,
}

/// Ranked DAG of chains `0 = w_0 < w_1 < ... < w_r` with per-node chain counts.
#[derive(Debug, Clone)]
pub struct MultiplicityPoset {
    spec: ProblemSpec,
    target: Option<Index>,
    ranks: Vec<Vec<Index>>,
    edges: Vec<Edge>,
    deg: HashMap<Index, BigUint>,
    odd: HashMap<Index, BigUint>,
}

pub fn build_poset(spec: &ProblemSpec) -> Result<MultiplicityPoset> {
    spec.validate()?;
    let target = spec.resolved_target()?;
    let mut by_dim: BTreeMap<usize, Vec<Index>> = BTreeMap::new();
    for w in enumerate_indices(&spec.space)? {
        by_dim.entry(dimension(&w)).or_default().push(w);
    }

    let mut cache = LrCache::new();
    let mut ranks = vec![vec![spec.space.bottom()?]];
    let mut edges = Vec::new();
    let mut dim = 0;
    for (i, condition) in spec.conditions.iter().enumerate() {
        dim += condition.codimension();
        let below: HashSet<&Index> = ranks[i].iter().collect();
        let mut rank = Vec::new();
        let mut stage_edges = Vec::new();
        for w in by_dim.get(&dim).map(Vec::as_slice).unwrap_or_default() {
            let list = covers(&spec.space, w, condition, &mut cache)?;
            let mut hit = false;
            for (v, m) in list.covers {
                if below.contains(&v) {
                    hit = true;
                    stage_edges.push(Edge { from: v, to: w.clone(), stage: i + 1, multiplicity: m });
                }
            }
            if hit {
                rank.push(w.clone());
            }
        }
        edges.extend(stage_edges);
        ranks.push(rank);
    }

    if let Some(t) = &target {
        prune(&mut ranks, &mut edges, t);
    }

    let mut poset = MultiplicityPoset { spec: spec.clone(), target, ranks, edges, deg: HashMap::new(), odd: HashMap::new() };
    poset.count_chains();
    Ok(poset)
}

/// Keeps only the nodes and edges lying on some chain that ends at `target`.
fn prune(ranks: &mut Vec<Vec<Index>>, edges: &mut Vec<Edge>, target: &Index) {
    let last = ranks.len() - 1;
    let bottom = ranks[0][0].clone();
    let mut alive: HashSet<Index> = HashSet::new();
    if ranks[last].contains(target) {
        alive.insert(target.clone());
    }
    for r in (1..=last).rev() {
        for e in edges.iter().filter(|e| e.stage == r) {
            if alive.contains(&e.to) {
                alive.insert(e.from.clone());
            }
        }
    }
    for rank in ranks.iter_mut() {
        rank.retain(|w| alive.contains(w));
    }
    edges.retain(|e| alive.contains(&e.from) && alive.contains(&e.to));
    if alive.is_empty() {
        // an unreachable target still leaves the bottom class in place
        ranks.truncate(1);
        ranks[0] = vec![bottom];
    }
}

impl MultiplicityPoset {
    fn count_chains(&mut self) {
        let Some(bottom) = self.ranks.first().and_then(|r| r.first()).cloned() else {
            return;
        };
        let mut deg: HashMap<Index, BigUint> = HashMap::new();
        let mut odd: HashMap<Index, BigUint> = HashMap::new();
        deg.insert(bottom.clone(), BigUint::one());
        odd.insert(bottom, BigUint::one());
        for r in 1..self.ranks.len() {
            for e in self.edges.iter().filter(|e| e.stage == r) {
                let d = deg.get(&e.from).cloned().unwrap_or_default() * e.multiplicity;
                *deg.entry(e.to.clone()).or_default() += d;
                if e.multiplicity % 2 == 1 {
                    let o = odd.get(&e.from).cloned().unwrap_or_default();
                    *odd.entry(e.to.clone()).or_default() += o;
                } else {
                    odd.entry(e.to.clone()).or_default();
                }
            }
        }
        self.deg = deg;
        self.odd = odd;
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn space(&self) -> &Space {
        &self.spec.space
    }

    pub fn target(&self) -> Option<&Index> {
        self.target.as_ref()
    }

    pub fn bottom(&self) -> Option<&Index> {
        self.ranks.first().and_then(|r| r.first())
    }

    pub fn ranks(&self) -> &[Vec<Index>] {
        &self.ranks
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Index> {
        self.ranks.iter().flatten()
    }

    pub fn node_count(&self) -> usize {
        self.ranks.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, w: &Index) -> bool {
        self.deg.contains_key(w)
    }

    pub fn rank_of(&self, w: &Index) -> Option<usize> {
        self.ranks.iter().position(|r| r.contains(w))
    }

    pub fn edges_into<'a>(&'a self, w: &'a Index) -> impl Iterator<Item = &'a Edge> {
        self.edges.iter().filter(move |e| &e.to == w)
    }

    /// Weighted number of chains from the bottom class to `w`.
    pub fn deg(&self, w: &Index) -> BigUint {
        self.deg.get(w).cloned().unwrap_or_default()
    }

    /// Number of chains from the bottom class to `w` with odd multiplicity.
    pub fn odd(&self, w: &Index) -> BigUint {
        self.odd.get(w).cloned().unwrap_or_default()
    }

    /// Count at the target, or zero when the problem has none.
    pub fn deg_target(&self) -> BigUint {
        self.target.as_ref().map(|t| self.deg(t)).unwrap_or_default()
    }

    pub fn odd_target(&self) -> BigUint {
        self.target.as_ref().map(|t| self.odd(t)).unwrap_or_default()
    }

    /// Multiplicities of all maximal chains ending at `w`, stopping after `limit` chains.
    pub fn chain_multiplicities(&self, w: &Index, limit: usize) -> Result<Vec<BigUint>> {
        let Some(rank) = self.rank_of(w) else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        self.walk_down(w, rank, BigUint::one(), limit, &mut out)?;
        out.sort();
        Ok(out)
    }

    fn walk_down(&self, w: &Index, rank: usize, m: BigUint, limit: usize, out: &mut Vec<BigUint>) -> Result<()> {
        if rank == 0 {
            if out.len() == limit {
                return Err(Error::Size(format!("more than {limit} chains")));
            }
            out.push(m);
            return Ok(());
        }
        for e in self.edges.iter().filter(|e| &e.to == w && e.stage == rank) {
            self.walk_down(&e.from, rank - 1, &m * e.multiplicity, limit, out)?;
        }
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for (r, rank) in self.ranks.iter().enumerate() {
            let names: Vec<String> = rank.iter().map(|w| format!("\"{}\"", label(w))).collect();
            out += &format!("  {{ rank=same; {} }} // rank {r}\n", names.join("; "));
        }
        for e in &self.edges {
            out += &format!("  \"{}\" -> \"{}\"", label(&e.from), label(&e.to));
            if e.multiplicity > 1 {
                out += &format!(" [label=\"{}\"]", e.multiplicity);
            }
            out += ";\n";
        }
        out + "}\n"
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .ranks
            .iter()
            .enumerate()
            .flat_map(|(r, rank)| {
                rank.iter().map(move |w| {
                    json!({
                        "label": label(w),
                        "rank": r,
                        "dimension": dimension(w),
                        "deg": self.deg(w).to_string(),
                        "odd": self.odd(w).to_string(),
                    })
                })
            })
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                json!({
                    "from": label(&e.from),
                    "to": label(&e.to),
                    "stage": e.stage,
                    "multiplicity": e.multiplicity,
                })
            })
            .collect();
        json!({
            "space": self.spec.space.to_string(),
            "conditions": self.spec.conditions.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "target": self.target.as_ref().map(label),
            "deg": self.deg_target().to_string(),
            "odd": self.odd_target().to_string(),
            "nodes": nodes,
            "edges": edges,
        })
    }
}

/// Text label of a node; the empty partition is shown as `∅`.
pub fn label(w: &Index) -> String {
    let s = w.to_string();
    if s.is_empty() {
        "∅".to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HasseFormat {
    Dot,
    Json,
}

impl std::str::FromStr for HasseFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(HasseFormat::Dot),
            "json" => Ok(HasseFormat::Json),
            _ => Err(Error::Format(format!("unknown Hasse format {s:?}; expected dot or json"))),
        }
    }
}

pub fn export_hasse(poset: &MultiplicityPoset, format: HasseFormat) -> String {
    match format {
        HasseFormat::Dot => poset.to_dot(),
        HasseFormat::Json => serde_json::to_string_pretty(&poset.to_json()).expect("json values serialize") + "\n",
    }
}

pub fn deg(poset: &MultiplicityPoset, w: &Index) -> BigUint {
    poset.deg(w)
}

pub fn odd(poset: &MultiplicityPoset, w: &Index) -> BigUint {
    poset.odd(w)
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Stage(i) => write!(f, "tau_{i}"),
            Condition::Schur(mu) => write!(f, "{mu}"),
            Condition::Simple => write!(f, "simple"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Row {
    pub r: usize,
    pub deg: BigUint,
    pub odd: BigUint,
}

/// The problem with `r` conditions `sigma_(2,1)` on `Gr(3, r+3)`.
pub fn table1_problem(r: usize) -> ProblemSpec {
    let mu = Partition::new(vec![2, 1]).expect("(2,1) is a partition");
    ProblemSpec::repeated(Space::Grassmannian { k: 3, n: r + 3 }, Condition::Schur(mu), r)
}

/// Rows `r = 2..=r_max` of the chain counts for [`table1_problem`].
pub fn table1(r_max: usize) -> Result<Vec<Table1Row>> {
    (2..=r_max)
        .map(|r| {
            let poset = build_poset(&table1_problem(r))?;
            Ok(Table1Row { r, deg: poset.deg_target(), odd: poset.odd_target() })
        })
        .collect()
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from("r,deg,odd\n");
    for row in rows {
        out += &format!("{},{},{}\n", row.r, row.deg, row.odd);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::indexing::StrictPartition;

    fn grass(s: &str, n: usize) -> Index {
        Space::Grassmannian { k: 3, n }.parse_index(s).unwrap()
    }

    #[test]
    fn gr37_poset_with_four_conditions() {
        let poset = build_poset(&table1_problem(4)).unwrap();
        let ranks: Vec<Vec<String>> = poset.ranks().iter().map(|r| r.iter().map(label).collect()).collect();
        assert_eq!(ranks.iter().map(Vec::len).collect::<Vec<_>>(), [1, 1, 5, 1, 1]);
        assert_eq!(ranks[0], ["1,2,3"]);
        assert_eq!(ranks[1], ["1,3,5"]);
        assert_eq!(ranks[3], ["3,5,7"]);
        assert_eq!(ranks[4], ["5,6,7"]);
        assert_eq!(poset.edges().len(), 12);
        let doubled: Vec<(String, String)> = poset
            .edges()
            .iter()
            .filter(|e| e.multiplicity == 2)
            .map(|e| (label(&e.from), label(&e.to)))
            .collect();
        assert_eq!(doubled, [("1,3,5".into(), "2,4,6".into()), ("2,4,6".into(), "3,5,7".into())]);
        let top = grass("567", 7);
        assert_eq!(poset.deg(&top), BigUint::from(8u32));
        assert_eq!(poset.odd(&top), BigUint::from(4u32));
        let chains = poset.chain_multiplicities(&top, 100).unwrap();
        assert_eq!(chains, [1u32, 1, 1, 1, 4].map(BigUint::from));
    }

    #[test]
    fn strict_problems() {
        for (space, deg, odd) in [
            (Space::Orthogonal { n: 3 }, 2u32, 2u32),
            (Space::Orthogonal { n: 4 }, 12, 12),
            (Space::Lagrangian { n: 2 }, 2, 0),
            (Space::Lagrangian { n: 3 }, 16, 0),
        ] {
            let r = space.dimension().unwrap();
            let poset = build_poset(&ProblemSpec::repeated(space.clone(), Condition::Simple, r)).unwrap();
            assert_eq!(poset.deg_target(), BigUint::from(deg), "{space}");
            assert_eq!(poset.odd_target(), BigUint::from(odd), "{space}");
        }
    }

    #[test]
    fn lg3_doubled_edges() {
        let poset = build_poset(&ProblemSpec::repeated(Space::Lagrangian { n: 3 }, Condition::Simple, 6)).unwrap();
        let mut doubled: Vec<String> = poset
            .edges()
            .iter()
            .filter(|e| e.multiplicity == 2)
            .map(|e| format!("{}>{}", label(&e.from), label(&e.to)))
            .collect();
        doubled.sort();
        assert_eq!(doubled, ["1>2", "21>31", "2>3", "31>32"]);
    }

    #[test]
    fn og1_chain() {
        let poset = build_poset(&ProblemSpec::repeated(Space::Orthogonal { n: 1 }, Condition::Simple, 1)).unwrap();
        assert_eq!(poset.node_count(), 2);
        assert_eq!(poset.edges().len(), 1);
        assert_eq!(poset.edges()[0].multiplicity, 1);
        assert_eq!(poset.deg_target(), BigUint::one());
    }

    #[test]
    fn partial_problems_keep_reachable_nodes() {
        let spec = ProblemSpec::repeated(Space::Lagrangian { n: 3 }, Condition::Simple, 2);
        let poset = build_poset(&spec).unwrap();
        assert!(poset.target().is_none());
        let two = Index::Strict(StrictPartition::new(vec![2], 3).unwrap());
        assert_eq!(poset.deg(&two), BigUint::from(2u32));
        assert_eq!(poset.odd(&two), BigUint::zero());

        let target = Index::Strict(StrictPartition::new(vec![2, 1], 3).unwrap());
        let err = build_poset(&spec.clone().with_target(target)).unwrap_err();
        assert!(matches!(err, Error::Spec(_)));
    }

    #[test]
    fn unreachable_target_counts_zero() {
        let space = Space::Grassmannian { k: 2, n: 4 };
        let mu = Condition::Schur(Partition::new(vec![2]).unwrap());
        let spec = ProblemSpec::new(space.clone(), vec![mu]).with_target(space.parse_index("2,3").unwrap());
        let poset = build_poset(&spec).unwrap();
        assert_eq!(poset.deg(&space.parse_index("2,3").unwrap()), BigUint::zero());
        assert_eq!(poset.node_count(), 1);
    }

    #[test]
    fn too_many_conditions() {
        let spec = ProblemSpec::repeated(Space::Lagrangian { n: 2 }, Condition::Simple, 4);
        assert!(matches!(build_poset(&spec), Err(Error::Spec(_))));
        let spec = ProblemSpec::repeated(Space::Lagrangian { n: 2 }, Condition::Stage(1), 1);
        assert!(matches!(build_poset(&spec), Err(Error::Spec(_))));
    }

    #[test]
    fn table_prefix() {
        let rows = table1(5).unwrap();
        let got: Vec<(usize, String, String)> =
            rows.iter().map(|r| (r.r, r.deg.to_string(), r.odd.to_string())).collect();
        assert_eq!(
            got,
            [(2, "1".into(), "1".into()), (3, "2".into(), "0".into()), (4, "8".into(), "4".into()), (5, "32".into(), "6".into())]
        );
        assert!(table1_csv(&rows).starts_with("r,deg,odd\n2,1,1\n"));
        assert!(table1(1).unwrap().is_empty());
    }

    #[test]
    fn hasse_exports() {
        let lg2 = build_poset(&ProblemSpec::repeated(Space::Lagrangian { n: 2 }, Condition::Simple, 3)).unwrap();
        let dot = export_hasse(&lg2, HasseFormat::Dot);
        assert!(dot.contains("\"1\" -> \"2\" [label=\"2\"];"));
        assert_eq!(dot.matches(" -> ").count(), 3);
        assert_eq!(lg2.node_count(), 4);

        let single = build_poset(&ProblemSpec::new(Space::Lagrangian { n: 2 }, vec![])).unwrap();
        assert_eq!(single.node_count(), 1);
        assert_eq!(export_hasse(&single, HasseFormat::Dot).matches(" -> ").count(), 0);

        let fig = build_poset(&table1_problem(4)).unwrap();
        let json = fig.to_json();
        assert_eq!(json["nodes"].as_array().unwrap().len(), 9);
        let doubled = json["edges"].as_array().unwrap().iter().filter(|e| e["multiplicity"] == 2).count();
        assert_eq!(doubled, 2);
        assert_eq!(json["deg"], "8");
        assert!("svg".parse::<HasseFormat>().is_err());
    }
}

//! Named problems with fixed spaces, conditions and parameters.

use crate::covers::{Condition, Partition};
use crate::error::{Error, Result};
use crate::geometry::{Anchor, Param};
use crate::indexing::Space;
use crate::multposet::{table1_problem, ProblemSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: ProblemSpec,
    pub params: Vec<Param>,
    pub anchor: Option<Anchor>,
}

pub const PRESET_NAMES: [&str; 8] = ["fig1", "ex21", "ex21sep", "lg2", "ex43", "lg3", "og3", "og4"];

fn ints(values: impl IntoIterator<Item = i64>) -> Vec<Param> {
    values.into_iter().map(Param::int).collect()
}

/// The full problem on `OG(n)` or `LG(n)`: one simple condition per dimension.
pub fn isotropic_full(space: Space) -> Result<ProblemSpec> {
    let dim = space.dimension()?;
    Ok(ProblemSpec::repeated(space, Condition::Simple, dim))
}

/// Flag conditions given by subspace dimensions, e.g. `[2, 3, 2, 3]`.
pub fn flag_problem(n: usize, d: Vec<usize>, dims: &[usize]) -> Result<ProblemSpec> {
    let space = Space::Flag { n, d };
    let shape = space.flag_shape()?;
    let conditions = dims.iter().map(|&k| shape.stage_of_dim(k).map(Condition::Stage)).collect::<Result<_>>()?;
    Ok(ProblemSpec::new(space, conditions))
}

pub fn preset(name: &str) -> Result<Preset> {
    let p = match name.to_ascii_lowercase().as_str() {
        "fig1" => Preset {
            name: "fig1",
            description: "Gr(3,7) with four conditions (2,1)",
            spec: table1_problem(4),
            params: Vec::new(),
            anchor: None,
        },
        "ex21" => Preset {
            name: "ex21",
            description: "Fl(2,3;5) with interlaced conditions X_2, X_3 at -8,-4,-2,-1,1,2,4,8",
            spec: flag_problem(5, vec![2, 3], &[2, 3, 2, 3, 2, 3, 2, 3])?,
            params: ints([-8, -4, -2, -1, 1, 2, 4, 8]),
            anchor: Some(Anchor::Zero),
        },
        "ex21sep" => Preset {
            name: "ex21sep",
            description: "Fl(2,3;5) with X_2 at 1,2,3,4 and X_3 at 5,6,7,8",
            spec: flag_problem(5, vec![2, 3], &[2, 2, 2, 2, 3, 3, 3, 3])?,
            params: ints(1..=8),
            anchor: Some(Anchor::Zero),
        },
        "lg2" => Preset {
            name: "lg2",
            description: "LG(2) with three simple conditions",
            spec: isotropic_full(Space::Lagrangian { n: 2 })?,
            params: ints(1..=3),
            anchor: Some(Anchor::Infinity),
        },
        "ex43" => Preset {
            name: "ex43",
            description: "LG(2) cell of (2) at infinity with simple conditions at 0 and 1",
            spec: ProblemSpec::repeated(Space::Lagrangian { n: 2 }, Condition::Simple, 2)
                .with_target(Space::Lagrangian { n: 2 }.parse_index("2")?),
            params: ints([0, 1]),
            anchor: Some(Anchor::Infinity),
        },
        "lg3" => Preset {
            name: "lg3",
            description: "LG(3) with six simple conditions",
            spec: isotropic_full(Space::Lagrangian { n: 3 })?,
            params: ints(1..=6),
            anchor: Some(Anchor::Infinity),
        },
        "og3" => Preset {
            name: "og3",
            description: "OG(3) with six simple conditions",
            spec: isotropic_full(Space::Orthogonal { n: 3 })?,
            params: ints(1..=6),
            anchor: Some(Anchor::Infinity),
        },
        "og4" => Preset {
            name: "og4",
            description: "OG(4) with ten simple conditions",
            spec: isotropic_full(Space::Orthogonal { n: 4 })?,
            params: ints(1..=10),
            anchor: Some(Anchor::Infinity),
        },
        _ => return Err(Error::Spec(format!("unknown preset {name:?}; known: {}", PRESET_NAMES.join(", ")))),
    };
    Ok(p)
}

/// `"og3"`, `"lg12"`: the full problem on an isotropic Grassmannian.
pub fn parse_isotropic(text: &str) -> Option<Space> {
    let t = text.to_ascii_lowercase();
    let (kind, n) = t.split_at(t.len().min(2));
    let n: usize = n.parse().ok()?;
    match kind {
        "og" => Some(Space::Orthogonal { n }),
        "lg" => Some(Space::Lagrangian { n }),
        _ => None,
    }
}

/// Reads Grassmannian conditions separated by `;` or whitespace, e.g. `"2,1;1;1"`.
pub fn parse_partitions(text: &str) -> Result<Vec<Partition>> {
    text.split(|c: char| c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(Partition::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multposet::build_poset;
    use num_bigint::BigUint;

    #[test]
    fn presets_are_consistent() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            p.spec.validate().unwrap();
            assert!(p.params.is_empty() || p.params.len() == p.spec.conditions.len(), "{name}");
        }
        let counts: Vec<(&str, u32)> = vec![("fig1", 8), ("ex21", 12), ("ex21sep", 12), ("lg2", 2), ("ex43", 2), ("lg3", 16), ("og3", 2), ("og4", 12)];
        for (name, deg) in counts {
            assert_eq!(build_poset(&preset(name).unwrap().spec).unwrap().deg_target(), BigUint::from(deg), "{name}");
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn isotropic_shorthand() {
        assert_eq!(parse_isotropic("og1"), Some(Space::Orthogonal { n: 1 }));
        assert_eq!(parse_isotropic("LG3"), Some(Space::Lagrangian { n: 3 }));
        assert_eq!(parse_isotropic("gr"), None);
        assert_eq!(parse_partitions("2,1; 1 1").unwrap().len(), 3);
    }
}

//! Parsing of command-line JSON arguments.

use reldav_core::group::{FabGroup, GroupElement, SubsetS};
use reldav_core::{Error, Result};
use serde::de::DeserializeOwned;

/// Reads an argument that is inline JSON, `@path` for a file, or `-` for
/// standard input.
pub fn read_json_arg(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
        return Ok(s);
    }
    if let Some(path) = arg.strip_prefix('@') {
        return std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")));
    }
    Ok(arg.to_string())
}

pub fn parse<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let text = read_json_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// A group as a bare factor list `[2,4]` or `{"invariant_factors":[2,4]}`.
/// `[]` is the trivial group.
pub fn parse_group(arg: &str) -> Result<FabGroup> {
    let text = read_json_arg(arg)?;
    if text.trim_start().starts_with('[') {
        let factors: Vec<u64> =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("group: {e}")))?;
        return if factors.is_empty() { Ok(FabGroup::trivial()) } else { FabGroup::new(&factors) };
    }
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("group: {e}")))
}

/// A subset as a list of elements `[[1,0],[0,2]]`; for cyclic groups bare
/// residues `[1,3]` are accepted too.
pub fn parse_subset(arg: &str, g: &FabGroup) -> Result<SubsetS> {
    let text = read_json_arg(arg)?;
    let elements: Vec<GroupElement> = match serde_json::from_str::<Vec<GroupElement>>(&text) {
        Ok(v) => v,
        Err(e) => match serde_json::from_str::<Vec<u64>>(&text) {
            Ok(v) if g.rank() == 1 => v.into_iter().map(|x| GroupElement(vec![x])).collect(),
            _ => return Err(Error::Parse(format!("subset: {e}"))),
        },
    };
    if elements.is_empty() {
        return Err(Error::InvalidArgument("subset must be nonempty".into()));
    }
    let s = SubsetS::new(elements);
    s.check_in(g)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_and_subsets() {
        assert_eq!(parse_group("[6]").unwrap().invariant_factors(), &[6]);
        assert_eq!(parse_group("[]").unwrap().order(), 1);
        assert_eq!(parse_group(r#"{"invariant_factors":[2,4]}"#).unwrap().order(), 8);
        assert!(matches!(parse_group("[6"), Err(Error::Parse(_))));
        let z6 = parse_group("[6]").unwrap();
        assert_eq!(parse_subset("[1,3]", &z6).unwrap().len(), 2);
        assert_eq!(parse_subset("[[1],[3],[1]]", &z6).unwrap().len(), 2);
        assert!(parse_subset("[7]", &z6).is_err());
        assert!(parse_subset("[]", &z6).is_err());
    }
}

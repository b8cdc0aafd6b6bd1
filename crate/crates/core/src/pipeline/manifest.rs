use std::collections::BTreeSet;
use std::fs::File;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::ProjectOnto;

/// One corpus entry. `path` is resolved against the manifest's directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub network_id: String,
    pub path: PathBuf,
    pub domain: String,
    /// Set for inputs known to be bipartite.
    pub project_onto: Option<ProjectOnto>,
}

#[derive(Deserialize)]
struct Row {
    network_id: String,
    path: String,
    domain: String,
    #[serde(default)]
    project_onto: Option<String>,
}

/// Reads a CSV manifest with columns `network_id,path,domain` and an
/// optional `project_onto`.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut rdr = csv::Reader::from_reader(file);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let row = row?;
        let line = i + 2;
        if row.network_id.is_empty() || row.domain.is_empty() {
            return Err(Error::Parse {
                line,
                message: "network_id and domain must be non-empty".into(),
            });
        }
        if !seen.insert(row.network_id.clone()) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate network id `{}`", row.network_id),
            });
        }
        let project_onto = match row.project_onto.as_deref().map(str::trim) {
            None | Some("") => None,
            Some(s) => Some(s.parse().map_err(|e: Error| Error::Parse {
                line,
                message: e.to_string(),
            })?),
        };
        out.push(ManifestEntry {
            network_id: row.network_id,
            path: base.join(row.path),
            domain: row.domain,
            project_onto,
        });
    }
    if out.is_empty() {
        return Err(Error::Empty(format!("manifest {} lists no networks", path.display())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    #[test]
    fn reads_entries_and_projection() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.csv");
        fs::write(&m, "network_id,path,domain,project_onto\na,g/a.txt,road,\nb,g/b.txt,\"x, y\",left\n").unwrap();
        let entries = read_manifest(&m).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].path, dir.path().join("g/a.txt"));
        assert_eq!(entries[0].project_onto, None);
        assert_eq!(entries[1].domain, "x, y");
        assert_eq!(entries[1].project_onto, Some(ProjectOnto::Left));
    }

    #[test]
    fn projection_column_is_optional() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.csv");
        fs::write(&m, "network_id,path,domain\na,a.txt,road\n").unwrap();
        assert_eq!(read_manifest(&m).unwrap()[0].project_onto, None);
    }

    #[test]
    fn rejects_duplicates_and_bad_sides() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.csv");
        fs::write(&m, "network_id,path,domain\na,a.txt,road\na,b.txt,road\n").unwrap();
        assert!(matches!(read_manifest(&m), Err(Error::Parse { line: 3, .. })));
        fs::write(&m, "network_id,path,domain,project_onto\na,a.txt,road,up\n").unwrap();
        assert!(read_manifest(&m).is_err());
        fs::write(&m, "network_id,path,domain\n").unwrap();
        assert!(matches!(read_manifest(&m), Err(Error::Empty(_))));
    }
}

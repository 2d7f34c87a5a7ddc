use std::io::BufRead;

use thiserror::Error;

use super::constants::{AU_KM, DEG, MAX_ASTEROID_ID};
use super::{ElementsError, Epoch, OrbitalElements};

const COLUMNS: usize = 8;
const HEADER: &str = "ID epoch(MJD) a(AU) e i(deg) LAN(deg) argperi(deg) M(deg)";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("I/O error reading asteroid catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("asteroid catalog is empty (expected a header line)")]
    MissingHeader,
    #[error("asteroid catalog line {line}: expected {COLUMNS} columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("asteroid catalog line {line}: cannot parse {column} from {token:?}")]
    Number {
        line: usize,
        column: &'static str,
        token: String,
    },
    #[error("asteroid catalog line {line}: ID {id} outside 1..={MAX_ASTEROID_ID}")]
    IdOutOfRange { line: usize, id: u64 },
    #[error("asteroid catalog line {line}: duplicate ID {id}")]
    DuplicateId { line: usize, id: u32 },
    #[error("asteroid catalog line {line}: {source}")]
    Elements {
        line: usize,
        #[source]
        source: ElementsError,
    },
}

/// Asteroid orbital elements indexed by ID. IDs need not be contiguous.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AsteroidCatalog {
    slots: Vec<Option<OrbitalElements>>,
    count: usize,
}

impl AsteroidCatalog {
    /// Builds a catalog from `(id, elements)` pairs, enforcing the same
    /// rules as the file loader.
    pub fn from_entries<I>(entries: I) -> Result<Self, CatalogError>
    where
        I: IntoIterator<Item = (u32, OrbitalElements)>,
    {
        let mut catalog = AsteroidCatalog::default();
        for (n, (id, el)) in entries.into_iter().enumerate() {
            catalog.insert(n + 1, id, el)?;
        }
        Ok(catalog)
    }

    fn insert(&mut self, line: usize, id: u32, el: OrbitalElements) -> Result<(), CatalogError> {
        if id == 0 || id > MAX_ASTEROID_ID {
            return Err(CatalogError::IdOutOfRange {
                line,
                id: u64::from(id),
            });
        }
        el.validate()
            .map_err(|source| CatalogError::Elements { line, source })?;
        let idx = id as usize;
        if self.slots.len() <= idx {
            self.slots.resize(idx + 1, None);
        }
        if self.slots[idx].is_some() {
            return Err(CatalogError::DuplicateId { line, id });
        }
        self.slots[idx] = Some(el);
        self.count += 1;
        Ok(())
    }

    pub fn get(&self, id: u32) -> Option<&OrbitalElements> {
        self.slots.get(id as usize).and_then(Option::as_ref)
    }

    pub fn contains(&self, id: u32) -> bool {
        self.get(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Entries in ascending ID order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &OrbitalElements)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(id, el)| el.as_ref().map(|el| (id as u32, el)))
    }
}

/// Reads the whitespace-delimited asteroid table: one header line, then
/// `ID epoch a e i LAN argperi M` with `a` in AU and angles in degrees.
/// Blank lines are skipped.
pub fn load_asteroid_catalog<R: BufRead>(source: R) -> Result<AsteroidCatalog, CatalogError> {
    let mut catalog = AsteroidCatalog::default();
    let mut saw_header = false;
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if !saw_header {
            saw_header = true;
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        if fields.len() != COLUMNS {
            return Err(CatalogError::ColumnCount {
                line: lineno,
                found: fields.len(),
            });
        }
        let id: u64 = fields[0].parse().map_err(|_| CatalogError::Number {
            line: lineno,
            column: "ID",
            token: fields[0].to_string(),
        })?;
        let id = u32::try_from(id)
            .ok()
            .filter(|id| (1..=MAX_ASTEROID_ID).contains(id))
            .ok_or(CatalogError::IdOutOfRange { line: lineno, id })?;
        const NAMES: [&str; COLUMNS] = ["ID", "epoch", "a", "e", "i", "LAN", "argperi", "M"];
        let mut values = [0.0f64; COLUMNS];
        for col in 1..COLUMNS {
            values[col] = fields[col]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CatalogError::Number {
                    line: lineno,
                    column: NAMES[col],
                    token: fields[col].to_string(),
                })?;
        }
        let el = OrbitalElements {
            semi_major_axis: values[2] * AU_KM,
            eccentricity: values[3],
            inclination: values[4] * DEG,
            lan: values[5] * DEG,
            arg_peri: values[6] * DEG,
            mean_anomaly: values[7] * DEG,
            epoch: Epoch::from_mjd(values[1]),
        };
        catalog.insert(lineno, id, el)?;
    }
    if !saw_header {
        return Err(CatalogError::MissingHeader);
    }
    Ok(catalog)
}

/// Writes a catalog in the loader's format with round-trip precision.
pub fn write_asteroid_catalog(catalog: &AsteroidCatalog) -> String {
    use crate::format::format_real;
    let mut out = String::with_capacity(64 + catalog.len() * 160);
    out.push_str(HEADER);
    out.push('\n');
    for (id, el) in catalog.iter() {
        let cols = [
            el.epoch.mjd(),
            el.semi_major_axis / AU_KM,
            el.eccentricity,
            el.inclination / DEG,
            el.lan / DEG,
            el.arg_peri / DEG,
            el.mean_anomaly / DEG,
        ];
        out.push_str(&id.to_string());
        for v in cols {
            out.push(' ');
            out.push_str(&format_real(v));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "ID epoch(MJD) a(AU) e i(deg) LAN(deg) argperi(deg) M(deg)\n\
        1 64328 3.073000e+00 1.177000e-01 1.745000e+01 1.403000e+01 1.830000e+00 3.053207e+02\n\
        2 64328 3.193000e+00 2.341000e-01 2.631000e+01 2.170900e+02 1.312800e+02 1.726297e+02\n\
        3 64328 3.142000e+00 5.460000e-02 5.280000e+00 2.139500e+02 1.776000e+01 1.329012e+02\n";

    #[test]
    fn loads_first_rows() {
        let cat = load_asteroid_catalog(SAMPLE.as_bytes()).unwrap();
        assert_eq!(cat.len(), 3);
        let a1 = cat.get(1).unwrap();
        assert!((a1.semi_major_axis - 3.073 * AU_KM).abs() < 1e-3);
        assert_eq!(a1.eccentricity, 0.1177);
        assert!((a1.inclination - 17.45 * DEG).abs() < 1e-15);
        assert_eq!(a1.epoch, Epoch::from_mjd(64328.0));
    }

    #[test]
    fn header_only_is_empty() {
        let cat = load_asteroid_catalog(&b"ID epoch a e i LAN argperi M\n"[..]).unwrap();
        assert!(cat.is_empty());
        assert!(matches!(
            load_asteroid_catalog(&b""[..]),
            Err(CatalogError::MissingHeader)
        ));
    }

    #[test]
    fn rejects_hyperbolic_row() {
        let text = "h\n1 64328 3.0 0.1 1 1 1 1\n2 64328 3.0 1.5 1 1 1 1\n";
        match load_asteroid_catalog(text.as_bytes()) {
            Err(CatalogError::Elements { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        let dup = "h\n7 64328 3.0 0.1 1 1 1 1\n7 64328 3.0 0.1 1 1 1 1\n";
        assert!(matches!(
            load_asteroid_catalog(dup.as_bytes()),
            Err(CatalogError::DuplicateId { line: 3, id: 7 })
        ));
        let short = "h\n1 64328 3.0 0.1 1 1 1\n";
        assert!(matches!(
            load_asteroid_catalog(short.as_bytes()),
            Err(CatalogError::ColumnCount { line: 2, found: 7 })
        ));
        let junk = "h\n1 64328 3.0 zero 1 1 1 1\n";
        assert!(matches!(
            load_asteroid_catalog(junk.as_bytes()),
            Err(CatalogError::Number {
                line: 2,
                column: "e",
                ..
            })
        ));
        let range = "h\n60001 64328 3.0 0.1 1 1 1 1\n";
        assert!(matches!(
            load_asteroid_catalog(range.as_bytes()),
            Err(CatalogError::IdOutOfRange { line: 2, id: 60001 })
        ));
    }

    #[test]
    fn tolerates_gaps_and_crlf() {
        let text = "h\r\n5 64328 3.0 0.1 1 1 1 1\r\n\r\n900 64328 2.0 0.2 1 1 1 1\r\n";
        let cat = load_asteroid_catalog(text.as_bytes()).unwrap();
        assert_eq!(cat.len(), 2);
        assert!(cat.contains(900) && !cat.contains(6));
    }

    #[test]
    fn writer_round_trips_and_load_is_deterministic() {
        let cat = load_asteroid_catalog(SAMPLE.as_bytes()).unwrap();
        let again = load_asteroid_catalog(SAMPLE.as_bytes()).unwrap();
        assert_eq!(cat, again);
        let text = write_asteroid_catalog(&cat);
        let back = load_asteroid_catalog(text.as_bytes()).unwrap();
        for ((i, a), (j, b)) in cat.iter().zip(back.iter()) {
            assert_eq!(i, j);
            assert!((a.semi_major_axis - b.semi_major_axis).abs() <= 1e-6);
            assert!((a.mean_anomaly - b.mean_anomaly).abs() <= 1e-14);
        }
    }
}

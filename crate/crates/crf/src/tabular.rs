//! CSV form of an enabler scoring table.

use crf_core::catalog::Catalog;
use crf_core::scoring::{weighted_score, EnablerAssessment, Importance, LikertLevel, ScoringError};

pub const HEADER: [&str; 11] = [
    "enabler_id",
    "name",
    "category",
    "importance",
    "readiness",
    "readiness_score",
    "aspiration",
    "aspiration_score",
    "threshold",
    "threshold_score",
    "cost",
];

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}: {source}")]
    Level {
        row: usize,
        #[source]
        source: ScoringError,
    },
}

/// One row per assessment. Fields are quoted only when needed and lines
/// end in LF. Unknown enablers export with an empty name and category.
pub fn export_csv(catalog: &Catalog, assessments: &[EnablerAssessment]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(HEADER).expect("writing to memory");
    for a in assessments {
        let enabler = catalog.enabler(&a.enabler_id);
        let score = |l: LikertLevel| weighted_score(a.importance, l).to_string();
        w.write_record([
            a.enabler_id.as_str(),
            enabler.map_or("", |e| e.name.as_str()),
            enabler.map_or("", |e| e.category.as_str()),
            a.importance.as_str(),
            a.readiness.as_str(),
            &score(a.readiness),
            a.aspiration.as_str(),
            &score(a.aspiration),
            a.threshold.as_str(),
            &score(a.threshold),
            a.cost.as_str(),
        ])
        .expect("writing to memory");
    }
    let bytes = w.into_inner().expect("flushing to memory");
    String::from_utf8(bytes).expect("csv of utf-8 input is utf-8")
}

/// Reads the level inputs back from an exported table. Score columns are
/// derived data and ignored.
pub fn parse_csv(text: &str) -> Result<Vec<EnablerAssessment>, CsvError> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header != HEADER {
        return Err(CsvError::Header(header));
    }
    let mut out = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let level = |col: usize| {
            record[col]
                .parse::<LikertLevel>()
                .map_err(|source| CsvError::Level { row, source })
        };
        let importance = record[3]
            .parse::<Importance>()
            .map_err(|source| CsvError::Level { row, source })?;
        out.push(EnablerAssessment::new(
            &record[0],
            importance,
            level(4)?,
            level(6)?,
            level(8)?,
            level(10)?,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crf_core::builtin::{builtin_croads_catalog, demo_assessments, ids};

    #[test]
    fn demo_table() {
        let text = export_csv(&builtin_croads_catalog(), &demo_assessments());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], HEADER.join(","));
        let rsu = lines.iter().find(|l| l.starts_with(ids::STATIONARY_RSU)).unwrap();
        assert!(rsu.ends_with(",high,medium,6,high,9,low,3,medium"), "{rsu}");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn header_only_when_empty() {
        let text = export_csv(&builtin_croads_catalog(), &[]);
        assert_eq!(text, format!("{}\n", HEADER.join(",")));
        assert_eq!(parse_csv(&text).unwrap(), []);
    }

    #[test]
    fn comma_in_name_is_quoted() {
        let mut catalog = builtin_croads_catalog();
        catalog.enablers[0].name = "DENM, profile".into();
        let text = export_csv(&catalog, &demo_assessments()[..1]);
        assert!(text.contains(",\"DENM, profile\","));
        assert_eq!(parse_csv(&text).unwrap(), demo_assessments()[..1]);
    }

    #[test]
    fn rejects_bad_header_and_levels() {
        assert!(matches!(parse_csv("a,b\n1,2\n"), Err(CsvError::Header(_))));
        let text = export_csv(&builtin_croads_catalog(), &demo_assessments()[..1]).replace(",high,high,9", ",high,extreme,9");
        assert!(matches!(parse_csv(&text), Err(CsvError::Level { row: 1, .. })));
    }
}

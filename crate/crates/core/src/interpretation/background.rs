use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fca::{parse_cxt, BitSet, FormalContext};

/// Interpretable features of the classes: objects are class ids, attributes
/// are features.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundKnowledge {
    context: FormalContext,
}

impl BackgroundKnowledge {
    pub fn new(context: FormalContext) -> Self {
        BackgroundKnowledge { context }
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn features(&self) -> &[String] {
        self.context.attributes()
    }

    /// Loads a `.cxt` file, or a CSV with header `class,feature1,…` and 0/1 cells.
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::format(path, e.to_string()))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("cxt")) {
            Ok(Self::new(parse_cxt(&text, path)?))
        } else {
            Self::parse_csv(&text, path)
        }
    }

    pub fn parse_csv(text: &str, source: &Path) -> Result<Self> {
        let err = |msg: String| Error::format(source, msg);
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| err(e.to_string()))?.clone();
        if header.get(0) != Some("class") {
            return Err(err(format!(
                "header must start with `class`, found `{}`",
                header.get(0).unwrap_or("")
            )));
        }
        let features: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut classes = Vec::new();
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| err(e.to_string()))?;
            let mut row = BitSet::empty(features.len());
            for (j, cell) in record.iter().skip(1).enumerate() {
                match cell {
                    "1" => row.insert(j),
                    "0" => {}
                    other => {
                        return Err(err(format!(
                            "row {}: cell `{other}` for feature `{}` is not 0 or 1",
                            line + 2,
                            features[j]
                        )))
                    }
                }
            }
            classes.push(record[0].to_string());
            rows.push(row);
        }
        let ctx = FormalContext::new(classes, features, rows).map_err(|e| err(e.to_string()))?;
        Ok(Self::new(ctx))
    }

    /// The feature context with rows reordered to follow `class_ids`.
    ///
    /// Both sides must name the same classes; otherwise the error lists the
    /// classes found on only one side.
    pub fn aligned_to(&self, class_ids: &[String]) -> Result<FormalContext> {
        let ours: BTreeSet<&str> = self.context.objects().iter().map(String::as_str).collect();
        let theirs: BTreeSet<&str> = class_ids.iter().map(String::as_str).collect();
        if ours != theirs || class_ids.len() != theirs.len() {
            let only_bk: Vec<&str> = ours.difference(&theirs).copied().collect();
            let only_view: Vec<&str> = theirs.difference(&ours).copied().collect();
            return Err(Error::Misaligned(format!(
                "only in background knowledge: {only_bk:?}, only in view: {only_view:?}"
            )));
        }
        let order: Vec<usize> = class_ids
            .iter()
            .map(|c| self.context.object_index(c))
            .collect::<Result<_>>()?;
        self.context.select_objects(&order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn src() -> PathBuf {
        PathBuf::from("bk.csv")
    }

    #[test]
    fn parses_csv() {
        let bk = BackgroundKnowledge::parse_csv("class,round,red\napple,1,1\nbanana,0,0\n", &src()).unwrap();
        assert_eq!(bk.features(), &["round".to_string(), "red".to_string()]);
        assert!(bk.context().incident(0, 1));
        assert!(!bk.context().incident(1, 0));
    }

    #[test]
    fn rejects_bad_csv() {
        for text in ["klass,a\nx,1\n", "class,a\nx,2\n", "class,a\nx,1\nx,0\n", "class,a,b\nx,1\n"] {
            let e = BackgroundKnowledge::parse_csv(text, &src()).unwrap_err();
            assert!(matches!(e, Error::Format { .. }), "{text:?}: {e}");
        }
    }

    #[test]
    fn alignment_reorders_and_reports_differences() {
        let bk = BackgroundKnowledge::parse_csv("class,f\na,1\nb,0\n", &src()).unwrap();
        let ctx = bk.aligned_to(&["b".into(), "a".into()]).unwrap();
        assert_eq!(ctx.objects(), &["b".to_string(), "a".to_string()]);
        assert!(ctx.incident(1, 0));
        let e = bk.aligned_to(&["a".into(), "c".into()]).unwrap_err().to_string();
        assert!(e.contains("\"b\"") && e.contains("\"c\""), "{e}");
    }
}

//! Declarative network descriptions.
//!
//! A scenario file is TOML with one optional `[sweep]` table and three arrays
//! of tables, `[[domain]]`, `[[sector]]` and `[[user]]`:
//!
//! ```toml
//! name = "two-sectors"
//!
//! [sweep]              # optional; used by `fairshare sweep`
//! start = 50.0
//! end = 500.0
//! step = 50.0
//!
//! [[domain]]
//! id = "A"
//! total_rate = 100.0
//!
//! [[sector]]
//! id = "A.1"
//! domain = "A"
//!
//! [[user]]
//! id = "A1"
//! sector = "A.1"
//! kind = "sigmoid"     # a, b
//! a = 3.0
//! b = 10.0
//!
//! [[user]]
//! id = "A4"
//! sector = "A.1"
//! kind = "log"         # k, r_max
//! k = 1.1
//! r_max = 100.0
//! ```
//!
//! Integers are accepted wherever a number is expected. Unknown keys are
//! rejected. Every user belongs to exactly one sector and every sector to
//! exactly one domain; domains share nothing.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Error, Result};
use crate::utility::UtilitySpec;

/// Grid of total rates, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            start: 50.0,
            end: 1150.0,
            step: 50.0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |message: &str| {
            Err(Error::Validation {
                entry: "sweep".into(),
                line: None,
                message: message.into(),
            })
        };
        if !(self.start > 0.0) || !self.start.is_finite() || !self.end.is_finite() {
            return bad("start and end must be finite and > 0");
        }
        if self.start > self.end {
            return bad("start must not exceed end");
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return bad("step must be finite and > 0");
        }
        Ok(())
    }

    /// The grid points `start, start + step, …` up to `end`.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainDef {
    pub id: String,
    pub total_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorDef {
    pub id: String,
    pub domain: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserDef {
    pub id: String,
    pub sector: String,
    pub utility: UtilitySpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub domains: Vec<DomainDef>,
    pub sectors: Vec<SectorDef>,
    pub users: Vec<UserDef>,
    pub sweep: Option<SweepSpec>,
}

impl Scenario {
    /// Checks referential integrity, uniqueness of ids and positivity of rates.
    pub fn validate(&self) -> Result<()> {
        validate_parts(
            self.domains.iter().map(|d| (d.id.as_str(), d.total_rate, None)),
            self.sectors
                .iter()
                .map(|s| (s.id.as_str(), s.domain.as_str(), None)),
            self.users
                .iter()
                .map(|u| (u.id.as_str(), u.sector.as_str(), None)),
        )?;
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
        }
        Ok(())
    }

    pub fn domain(&self, id: &str) -> Option<&DomainDef> {
        self.domains.iter().find(|d| d.id == id)
    }

    /// Sectors of `domain`, in declaration order.
    pub fn sectors_of<'a>(&'a self, domain: &'a str) -> impl Iterator<Item = &'a SectorDef> + 'a {
        self.sectors.iter().filter(move |s| s.domain == domain)
    }

    /// Users of `sector`, in declaration order.
    pub fn users_of<'a>(&'a self, sector: &'a str) -> impl Iterator<Item = &'a UserDef> + 'a {
        self.users.iter().filter(move |u| u.sector == sector)
    }

    /// Same network with every domain budget set to `rate`.
    pub fn with_total_rate(&self, rate: f64) -> Self {
        let mut out = self.clone();
        for d in &mut out.domains {
            d.total_rate = rate;
        }
        out
    }

    /// Same network with all sectors pooled under a single MME domain whose
    /// budget is the sum of the original budgets.
    pub fn pooled(&self) -> Self {
        const GLOBAL: &str = "global";
        let mut out = self.clone();
        out.domains = vec![DomainDef {
            id: GLOBAL.into(),
            total_rate: self.domains.iter().map(|d| d.total_rate).sum(),
        }];
        for s in &mut out.sectors {
            s.domain = GLOBAL.into();
        }
        out
    }

    /// Renders the scenario in the file format accepted by [`parse_scenario`].
    pub fn to_toml(&self) -> String {
        let file = FileOut {
            name: &self.name,
            sweep: self.sweep,
            domain: self
                .domains
                .iter()
                .map(|d| DomainOut {
                    id: &d.id,
                    total_rate: d.total_rate,
                })
                .collect(),
            sector: self
                .sectors
                .iter()
                .map(|s| SectorOut {
                    id: &s.id,
                    domain: &s.domain,
                })
                .collect(),
            user: self.users.iter().map(UserOut::from).collect(),
        };
        toml::to_string(&file).expect("scenario always serializes")
    }
}

fn validation(entry: &str, line: Option<usize>, message: impl fmt::Display) -> Error {
    Error::Validation {
        entry: entry.to_string(),
        line,
        message: message.to_string(),
    }
}

fn validate_parts<'a>(
    domains: impl Iterator<Item = (&'a str, f64, Option<usize>)>,
    sectors: impl Iterator<Item = (&'a str, &'a str, Option<usize>)>,
    users: impl Iterator<Item = (&'a str, &'a str, Option<usize>)>,
) -> Result<()> {
    let mut domain_ids = HashSet::new();
    for (id, total, line) in domains {
        if !domain_ids.insert(id) {
            return Err(validation(id, line, "duplicate domain id"));
        }
        if !(total > 0.0) || !total.is_finite() {
            return Err(validation(id, line, format!("total_rate must be finite and > 0, got {total}")));
        }
    }
    if domain_ids.is_empty() {
        return Err(validation("domain", None, "at least one domain is required"));
    }

    let mut sector_ids = HashSet::new();
    for (id, domain, line) in sectors {
        if !sector_ids.insert(id) {
            return Err(validation(id, line, "duplicate sector id"));
        }
        if !domain_ids.contains(domain) {
            return Err(validation(id, line, format!("unknown domain `{domain}`")));
        }
    }
    if sector_ids.is_empty() {
        return Err(validation("sector", None, "at least one sector is required"));
    }

    let mut user_ids = HashSet::new();
    for (id, sector, line) in users {
        if !user_ids.insert(id) {
            return Err(validation(id, line, "duplicate user id"));
        }
        if !sector_ids.contains(sector) {
            return Err(validation(id, line, format!("unknown sector `{sector}`")));
        }
    }
    if user_ids.is_empty() {
        return Err(validation("user", None, "at least one user is required"));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileIn {
    name: String,
    sweep: Option<SweepSpec>,
    #[serde(default)]
    domain: Vec<DomainIn>,
    #[serde(default)]
    sector: Vec<SectorIn>,
    #[serde(default)]
    user: Vec<UserIn>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainIn {
    id: Spanned<String>,
    total_rate: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SectorIn {
    id: Spanned<String>,
    domain: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UserIn {
    id: Spanned<String>,
    sector: String,
    kind: String,
    a: Option<f64>,
    b: Option<f64>,
    k: Option<f64>,
    r_max: Option<f64>,
}

#[derive(Serialize)]
struct FileOut<'a> {
    name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepSpec>,
    domain: Vec<DomainOut<'a>>,
    sector: Vec<SectorOut<'a>>,
    user: Vec<UserOut<'a>>,
}

#[derive(Serialize)]
struct DomainOut<'a> {
    id: &'a str,
    total_rate: f64,
}

#[derive(Serialize)]
struct SectorOut<'a> {
    id: &'a str,
    domain: &'a str,
}

#[derive(Serialize)]
struct UserOut<'a> {
    id: &'a str,
    sector: &'a str,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_max: Option<f64>,
}

impl<'a> From<&'a UserDef> for UserOut<'a> {
    fn from(u: &'a UserDef) -> Self {
        let (a, b, k, r_max) = match &u.utility {
            UtilitySpec::Sigmoid(s) => (Some(s.a()), Some(s.b()), None, None),
            UtilitySpec::Logarithmic(l) => (None, None, Some(l.k()), Some(l.r_max())),
        };
        Self {
            id: &u.id,
            sector: &u.sector,
            kind: u.utility.kind(),
            a,
            b,
            k,
            r_max,
        }
    }
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

fn user_utility(u: &UserIn, line: usize) -> Result<UtilitySpec> {
    let id = u.id.get_ref();
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| validation(id, Some(line), format!("{} user needs `{name}`", u.kind)))
    };
    let forbid = |v: Option<f64>, name: &str| match v {
        Some(_) => Err(validation(id, Some(line), format!("`{name}` does not apply to a {} user", u.kind))),
        None => Ok(()),
    };
    let spec = match u.kind.as_str() {
        "sigmoid" => {
            forbid(u.k, "k")?;
            forbid(u.r_max, "r_max")?;
            UtilitySpec::sigmoid(need(u.a, "a")?, need(u.b, "b")?)
        }
        "log" => {
            forbid(u.a, "a")?;
            forbid(u.b, "b")?;
            UtilitySpec::logarithmic(need(u.k, "k")?, need(u.r_max, "r_max")?)
        }
        other => {
            return Err(validation(
                id,
                Some(line),
                format!("kind must be `sigmoid` or `log`, got `{other}`"),
            ))
        }
    };
    spec.map_err(|e| validation(id, Some(line), e))
}

/// Parses and validates scenario text; `origin` only labels errors.
pub fn parse_scenario(src: &str, origin: &Path) -> Result<Scenario> {
    let file: FileIn = toml::from_str(src).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        line: e.span().map_or(0, |s| line_of(src, s.start)),
        message: e.message().to_string(),
    })?;

    let line = |s: &Spanned<String>| Some(line_of(src, s.span().start));
    validate_parts(
        file.domain
            .iter()
            .map(|d| (d.id.get_ref().as_str(), d.total_rate, line(&d.id))),
        file.sector
            .iter()
            .map(|s| (s.id.get_ref().as_str(), s.domain.as_str(), line(&s.id))),
        file.user
            .iter()
            .map(|u| (u.id.get_ref().as_str(), u.sector.as_str(), line(&u.id))),
    )?;

    let users = file
        .user
        .iter()
        .map(|u| {
            Ok(UserDef {
                id: u.id.get_ref().clone(),
                sector: u.sector.clone(),
                utility: user_utility(u, line_of(src, u.id.span().start))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let scenario = Scenario {
        name: file.name,
        domains: file
            .domain
            .into_iter()
            .map(|d| DomainDef {
                id: d.id.into_inner(),
                total_rate: d.total_rate,
            })
            .collect(),
        sectors: file
            .sector
            .into_iter()
            .map(|s| SectorDef {
                id: s.id.into_inner(),
                domain: s.domain,
            })
            .collect(),
        users,
        sweep: file.sweep,
    };
    if let Some(sweep) = &scenario.sweep {
        sweep.validate()?;
    }
    Ok(scenario)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path)?;
    parse_scenario(&src, path)
}

pub fn write_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, scenario.to_toml())?;
    Ok(())
}

enum Kind {
    Sig(f64, f64),
    Log(f64),
}

use Kind::{Log, Sig};

/// Utilities of the three-cell network, three sectors per BS, six users per
/// sector. Log users all have `r_max = 100`.
const TABLE1: [(&str, [[Kind; 6]; 3]); 3] = [
    (
        "A",
        [
            [Sig(3.0, 10.0), Sig(3.0, 10.3), Sig(1.0, 10.6), Log(1.1), Log(1.2), Log(1.3)],
            [Sig(3.0, 10.0), Sig(3.0, 11.0), Sig(1.0, 12.0), Log(1.0), Log(2.0), Log(3.0)],
            [Sig(3.0, 15.1), Sig(3.0, 15.3), Sig(3.0, 15.5), Log(10.0), Log(11.0), Log(12.0)],
        ],
    ),
    (
        "B",
        [
            [Sig(3.0, 10.9), Sig(3.0, 11.2), Sig(1.0, 11.5), Log(1.4), Log(1.5), Log(1.6)],
            [Sig(3.0, 13.0), Sig(3.0, 14.0), Sig(1.0, 15.0), Log(4.0), Log(5.0), Log(6.0)],
            [Sig(3.0, 15.7), Sig(3.0, 15.9), Sig(3.0, 17.3), Log(13.0), Log(14.0), Log(15.0)],
        ],
    ),
    (
        "C",
        [
            [Sig(3.0, 11.8), Sig(3.0, 12.1), Sig(1.0, 12.4), Log(1.7), Log(1.8), Log(1.9)],
            [Sig(3.0, 16.0), Sig(3.0, 17.0), Sig(1.0, 18.0), Log(7.0), Log(8.0), Log(9.0)],
            [Sig(3.0, 17.5), Sig(3.0, 17.7), Sig(3.0, 17.9), Log(16.0), Log(17.0), Log(18.0)],
        ],
    ),
];

/// Budget given to each BS domain by [`builtin_table1`].
pub const TABLE1_DEFAULT_RATE: f64 = 100.0;

/// The built-in 54-user, three-BS network with one MME domain per BS.
///
/// Sector ids are `<BS>.<n>` (`A.1` … `C.3`), user ids `<BS><n>` numbered
/// 1–18 within each BS.
pub fn builtin_table1() -> Scenario {
    let mut domains = Vec::new();
    let mut sectors = Vec::new();
    let mut users = Vec::new();
    for (bs, bs_sectors) in &TABLE1 {
        domains.push(DomainDef {
            id: bs.to_string(),
            total_rate: TABLE1_DEFAULT_RATE,
        });
        for (s, members) in bs_sectors.iter().enumerate() {
            let sector = format!("{bs}.{}", s + 1);
            sectors.push(SectorDef {
                id: sector.clone(),
                domain: bs.to_string(),
            });
            for (j, kind) in members.iter().enumerate() {
                let utility = match *kind {
                    Sig(a, b) => UtilitySpec::sigmoid(a, b),
                    Log(k) => UtilitySpec::logarithmic(k, 100.0),
                }
                .expect("table parameters are positive");
                users.push(UserDef {
                    id: format!("{bs}{}", 6 * s + j + 1),
                    sector: sector.clone(),
                    utility,
                });
            }
        }
    }
    Scenario {
        name: "table1".into(),
        domains,
        sectors,
        users,
        sweep: Some(SweepSpec::default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> Result<Scenario> {
        parse_scenario(src, Path::new("test.toml"))
    }

    const SMALL: &str = r#"
name = "small"

[[domain]]
id = "D"
total_rate = 10

[[sector]]
id = "S"
domain = "D"

[[user]]
id = "u1"
sector = "S"
kind = "log"
k = 1
r_max = 100

[[user]]
id = "u2"
sector = "S"
kind = "sigmoid"
a = 3.0
b = 10.0
"#;

    #[test]
    fn parses_small_file() {
        let s = parse(SMALL).unwrap();
        assert_eq!(s.users.len(), 2);
        assert_eq!(s.domains[0].total_rate, 10.0);
        assert_eq!(s.users[1].utility, UtilitySpec::sigmoid(3.0, 10.0).unwrap());
        assert!(s.sweep.is_none());
    }

    #[test]
    fn table1_shape() {
        let t = builtin_table1();
        t.validate().unwrap();
        assert_eq!(t.domains.len(), 3);
        assert_eq!(t.sectors.len(), 9);
        assert_eq!(t.users.len(), 54);
        for s in &t.sectors {
            assert_eq!(t.users_of(&s.id).count(), 6);
        }
    }

    #[test]
    fn table1_entries() {
        let t = builtin_table1();
        let get = |id: &str| t.users.iter().find(|u| u.id == id).unwrap();
        assert_eq!(get("A1").utility, UtilitySpec::sigmoid(3.0, 10.0).unwrap());
        assert_eq!(get("A1").sector, "A.1");
        assert_eq!(get("A3").utility, UtilitySpec::sigmoid(1.0, 10.6).unwrap());
        assert_eq!(get("A16").utility, UtilitySpec::logarithmic(10.0, 100.0).unwrap());
        assert_eq!(get("A16").sector, "A.3");
        assert_eq!(get("B11").utility, UtilitySpec::logarithmic(5.0, 100.0).unwrap());
        assert_eq!(get("C9").utility, UtilitySpec::sigmoid(1.0, 18.0).unwrap());
        assert_eq!(get("C15").utility, UtilitySpec::sigmoid(3.0, 17.9).unwrap());
        assert_eq!(get("C18").utility, UtilitySpec::logarithmic(18.0, 100.0).unwrap());
    }

    #[test]
    fn dangling_sector_names_the_user_and_line() {
        let src = SMALL.replace("sector = \"S\"\nkind = \"log\"", "sector = \"nope\"\nkind = \"log\"");
        match parse(&src) {
            Err(Error::Validation { entry, line, message }) => {
                assert_eq!(entry, "u1");
                assert_eq!(line, Some(13));
                assert!(message.contains("nope"));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn empty_user_list_is_rejected() {
        let src = SMALL.split("[[user]]").next().unwrap();
        assert!(matches!(parse(src), Err(Error::Validation { entry, .. }) if entry == "user"));
    }

    #[test]
    fn parse_errors_carry_a_line() {
        let src = SMALL.replace("total_rate = 10", "total_rate = ten");
        match parse(&src) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_parameters_are_validation_errors() {
        let src = SMALL.replace("a = 3.0", "a = -3.0");
        assert!(matches!(parse(&src), Err(Error::Validation { entry, .. }) if entry == "u2"));

        let src = SMALL.replace("kind = \"log\"", "kind = \"linear\"");
        assert!(matches!(parse(&src), Err(Error::Validation { .. })));

        let src = SMALL.replace("b = 10.0", "b = 10.0\nk = 2.0");
        assert!(matches!(parse(&src), Err(Error::Validation { .. })));

        let src = SMALL.replace("total_rate = 10", "total_rate = 0");
        assert!(matches!(parse(&src), Err(Error::Validation { entry, .. }) if entry == "D"));

        let src = SMALL.replace("id = \"u2\"", "id = \"u1\"");
        assert!(matches!(parse(&src), Err(Error::Validation { .. })));

        let src = SMALL.replace("k = 1\n", "k = 1\ncolour = \"red\"\n");
        assert!(matches!(parse(&src), Err(Error::Parse { .. })));
    }

    #[test]
    fn sweep_grid() {
        let g = SweepSpec::default().values();
        assert_eq!(g.len(), 23);
        assert_eq!(g[0], 50.0);
        assert_eq!(*g.last().unwrap(), 1150.0);
        let single = SweepSpec {
            start: 50.0,
            end: 50.0,
            step: 50.0,
        };
        assert_eq!(single.values(), vec![50.0]);
        assert!(SweepSpec { start: 5.0, end: 1.0, step: 1.0 }.validate().is_err());
        assert!(SweepSpec { start: 1.0, end: 5.0, step: 0.0 }.validate().is_err());
    }

    #[test]
    fn pooled_network_has_one_domain() {
        let g = builtin_table1().pooled();
        g.validate().unwrap();
        assert_eq!(g.domains.len(), 1);
        assert_eq!(g.domains[0].total_rate, 300.0);
        assert_eq!(g.sectors_of("global").count(), 9);
    }
}

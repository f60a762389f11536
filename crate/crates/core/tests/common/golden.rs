use foliage::cli::Op;
use std::path::PathBuf;

pub struct Case {
    pub name: &'static str,
    pub op: Op,
    pub has_input: bool,
}

const fn case(name: &'static str, op: Op) -> Case {
    Case {
        name,
        op,
        has_input: true,
    }
}

pub const CASES: &[Case] = &[
    case("bracket", Op::Bracket),
    case("bracket_undeclared_basis", Op::Bracket),
    case("invariance", Op::Invariance),
    case("foliation_plane", Op::Foliation),
    case("foliation_space", Op::Foliation),
    case("planar_radial", Op::Planar),
    case("planar_rotation", Op::Planar),
    case("planar_hyperbolic", Op::Planar),
    case("planar_saddle", Op::Planar),
    case("flow_series", Op::FlowSeries),
    Case {
        name: "anosov",
        op: Op::Anosov,
        has_input: false,
    },
];

pub fn fixture(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(file)
}

impl Case {
    pub fn input_path(&self) -> Option<PathBuf> {
        self.has_input
            .then(|| fixture(&format!("{}.txt", self.name)))
    }

    pub fn input(&self) -> String {
        self.input_path()
            .map(|p| std::fs::read_to_string(p).unwrap())
            .unwrap_or_default()
    }

    pub fn expected(&self) -> String {
        std::fs::read_to_string(fixture(&format!("{}.json", self.name))).unwrap()
    }

    pub fn expect_ok(&self) -> bool {
        self.name != "bracket_undeclared_basis"
    }
}

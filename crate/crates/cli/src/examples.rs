//! The shipped problem files, generated from the core fixture builders.

use hyperloc::fixtures::{projective, ProjectiveMap};

use crate::error::CliError;
use crate::schema::{Family, Problem, ProblemFile};

pub const PHI: &str = "example_5_1_phi.json";
pub const PSI: &str = "example_5_1_psi.json";
pub const M1: &str = "example_5_2_M1.json";

/// Default sector count stored in the parametric file.
pub const DEFAULT_K: usize = 3;

fn projective_note(map: ProjectiveMap) -> String {
    let (action, line, point) = match map {
        ProjectiveMap::Stretch => ("[x:2y:z]", "2", "I/2"),
        ProjectiveMap::Shrink => ("[x:y/2:z]", "1/2", "2I"),
    };
    format!(
        "Real projective plane, F the constant sheaf on the coordinate triangle Z, map {action}. \
         Component `line` is y = 0 with normal map {line}: the constant sheaf on the normal line at its two \
         vertices (Z contains the transverse line there) and the skyscraper along its two arcs. Component \
         `point` is [0:1:0] with normal map {point}, where Z is the union of the two axes. The global model \
         is the cellular plane with every cell fixed and identity stalk actions."
    )
}

const M1_NOTE: &str = "Twisted map on the solid torus with k sectors (override with --k). Only the component \
     through the north pole is modeled: the vertex theta = 0 carries the open sheaf on the complement of k rays \
     with normal map 2I, the arc theta != 0 the constant sheaf with normal map 2 Rot(pi/2). The global side is \
     chi_c of Y minus Z.";

pub fn projective_problem(map: ProjectiveMap) -> Problem {
    let f = projective(map);
    Problem::Verification { components: f.components(), global: f.global }
}

/// File name and contents of every shipped problem file.
pub fn example_files() -> Result<Vec<(&'static str, ProblemFile)>, CliError> {
    Ok(vec![
        (PHI, projective_problem(ProjectiveMap::Stretch).to_file(Some(projective_note(ProjectiveMap::Stretch)))?),
        (PSI, projective_problem(ProjectiveMap::Shrink).to_file(Some(projective_note(ProjectiveMap::Shrink)))?),
        (M1, Problem::Family(Family::TwistedSectors { k: DEFAULT_K }).to_file(Some(M1_NOTE.to_string()))?),
    ])
}

pub fn render_file(f: &ProblemFile) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(f)? + "\n")
}

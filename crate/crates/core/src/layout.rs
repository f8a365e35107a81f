//! Floorplans at logical-patch granularity, their validators, spacetime
//! volume accounting and SVG/JSON export.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constructions::{build_delayed_choice_cz, build_fowler_multiplexer_cz, CzChoice};
use crate::error::{Error, Result};
use crate::factory::{FactorySpec, FACTORY_HEIGHT, FACTORY_PATCHES, FACTORY_WIDTH};
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    CczFactory,
    FixupBox,
    DataRowTarget,
    DataRowOffset,
    DataRowIdle,
    AccessRow,
    AccessCorridor,
    MajArea,
    /// Space reserved for the lookup's unary iteration circuit.
    IterationArea,
    Gap,
    Unused,
}

const ROLES: [(Role, char, &str); 11] = [
    (Role::CczFactory, 'F', "#d9534f"),
    (Role::FixupBox, 'x', "#f0ad4e"),
    (Role::DataRowTarget, 'T', "#5cb85c"),
    (Role::DataRowOffset, 'O', "#f7e463"),
    (Role::DataRowIdle, 'i', "#c8e6c9"),
    (Role::AccessRow, 'a', "#ffffff"),
    (Role::AccessCorridor, 'c', "#e3f2fd"),
    (Role::MajArea, 'M', "#5bc0de"),
    (Role::IterationArea, 'I', "#555555"),
    (Role::Gap, 'g', "#eeeeee"),
    (Role::Unused, '.', "#ffffff"),
];

impl Role {
    pub fn code(self) -> char {
        ROLES.iter().find(|r| r.0 == self).expect("listed").1
    }

    pub fn from_code(c: char) -> Option<Role> {
        ROLES.iter().find(|r| r.1 == c).map(|r| r.0)
    }

    fn fill(self) -> &'static str {
        ROLES.iter().find(|r| r.0 == self).expect("listed").2
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::CczFactory => "ccz_factory",
            Role::FixupBox => "fixup_box",
            Role::DataRowTarget => "data_row_target",
            Role::DataRowOffset => "data_row_offset",
            Role::DataRowIdle => "data_row_idle",
            Role::AccessRow => "access_row",
            Role::AccessCorridor => "access_corridor",
            Role::MajArea => "maj_area",
            Role::IterationArea => "iteration_area",
            Role::Gap => "gap",
            Role::Unused => "unused",
        }
    }

    /// Tiles a data row may cross to reach its destination.
    fn passable(self) -> bool {
        matches!(self, Role::Gap | Role::AccessRow | Role::AccessCorridor)
    }

    fn is_data_row(self) -> bool {
        matches!(self, Role::DataRowTarget | Role::DataRowOffset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanKind {
    Adder,
    Lookup,
}

/// A rectangle of one role. Data rows also hold `DataRowIdle` spacing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub role: Role,
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
    /// Factory index for factories and their fixup boxes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<usize>,
}

impl Region {
    fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.y..self.y + self.h).flat_map(move |y| (self.x..self.x + self.w).map(move |x| (x, y)))
    }

    fn overlaps(&self, o: &Region) -> bool {
        self.x < o.x + o.w && o.x < self.x + self.w && self.y < o.y + o.h && o.y < self.y + self.h
    }

    /// Shares an edge segment with `o` (touching, not overlapping).
    fn adjacent(&self, o: &Region) -> bool {
        let h_touch = (self.x + self.w == o.x || o.x + o.w == self.x)
            && self.y < o.y + o.h
            && o.y < self.y + self.h;
        let v_touch = (self.y + self.h == o.y || o.y + o.h == self.y)
            && self.x < o.x + o.w
            && o.x < self.x + self.w;
        h_touch || v_touch
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationKind {
    FactoryPort,
    FixupChimney,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub kind: AnnotationKind,
    pub x: usize,
    pub y: usize,
    pub factory: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFloorplan", into = "RawFloorplan")]
pub struct Floorplan {
    pub kind: PlanKind,
    pub width: usize,
    pub height: usize,
    pub patch_distance: u32,
    tiles: Vec<Role>,
    pub regions: Vec<Region>,
    pub annotations: Vec<Annotation>,
    /// Row pattern of a lookup plan, e.g. `R_L_L_R`.
    pub pattern: Option<String>,
}

/// JSON form: tiles as one string per row, one role code per character.
#[derive(Serialize, Deserialize)]
struct RawFloorplan {
    kind: PlanKind,
    width: usize,
    height: usize,
    patch_distance: u32,
    legend: Vec<(char, String)>,
    tiles: Vec<String>,
    regions: Vec<Region>,
    annotations: Vec<Annotation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pattern: Option<String>,
}

impl From<Floorplan> for RawFloorplan {
    fn from(p: Floorplan) -> Self {
        let tiles = p
            .tiles
            .chunks(p.width.max(1))
            .map(|row| row.iter().map(|r| r.code()).collect())
            .collect();
        RawFloorplan {
            kind: p.kind,
            width: p.width,
            height: p.height,
            patch_distance: p.patch_distance,
            legend: ROLES
                .iter()
                .map(|r| (r.1, r.0.name().to_string()))
                .collect(),
            tiles,
            regions: p.regions,
            annotations: p.annotations,
            pattern: p.pattern,
        }
    }
}

impl TryFrom<RawFloorplan> for Floorplan {
    type Error = Error;

    fn try_from(raw: RawFloorplan) -> Result<Self> {
        if raw.tiles.len() != raw.height {
            return Err(Error::argument("tile row count does not match height"));
        }
        let mut tiles = Vec::with_capacity(raw.width * raw.height);
        for row in &raw.tiles {
            if row.chars().count() != raw.width {
                return Err(Error::argument("tile row length does not match width"));
            }
            for c in row.chars() {
                tiles.push(
                    Role::from_code(c)
                        .ok_or_else(|| Error::argument(format!("unknown tile code {c:?}")))?,
                );
            }
        }
        Ok(Floorplan {
            kind: raw.kind,
            width: raw.width,
            height: raw.height,
            patch_distance: raw.patch_distance,
            tiles,
            regions: raw.regions,
            annotations: raw.annotations,
            pattern: raw.pattern,
        })
    }
}

impl Floorplan {
    fn empty(kind: PlanKind, width: usize, height: usize, d: u32) -> Self {
        Floorplan {
            kind,
            width,
            height,
            patch_distance: d,
            tiles: vec![Role::Unused; width * height],
            regions: Vec::new(),
            annotations: Vec::new(),
            pattern: None,
        }
    }

    pub fn tile(&self, x: usize, y: usize) -> Role {
        self.tiles[y * self.width + x]
    }

    fn set(&mut self, x: usize, y: usize, role: Role) {
        let w = self.width;
        self.tiles[y * w + x] = role;
    }

    /// Paints a region; overlapping an earlier region is a contract error.
    fn place(&mut self, region: Region) -> Result<()> {
        if region.w == 0 || region.h == 0 {
            return Ok(());
        }
        if region.x + region.w > self.width || region.y + region.h > self.height {
            return Err(Error::contract(format!("{region:?} leaves the grid")));
        }
        if let Some(o) = self.regions.iter().find(|o| o.overlaps(&region)) {
            return Err(Error::contract(format!("{region:?} overlaps {o:?}")));
        }
        let cells: Vec<_> = region.cells().collect();
        for (x, y) in cells {
            self.set(x, y, region.role);
        }
        self.regions.push(region);
        Ok(())
    }

    fn rect(&mut self, role: Role, x: usize, y: usize, w: usize, h: usize) -> Result<()> {
        self.place(Region {
            role,
            x,
            y,
            w,
            h,
            owner: None,
        })
    }

    pub fn count_role(&self, role: Role) -> usize {
        self.tiles.iter().filter(|&&r| r == role).count()
    }

    pub fn regions_of(&self, role: Role) -> impl Iterator<Item = &Region> {
        self.regions.iter().filter(move |r| r.role == role)
    }

    fn neighbors(&self, x: usize, y: usize) -> impl Iterator<Item = (usize, usize)> {
        let (w, h) = (self.width, self.height);
        [(0i64, 1i64), (1, 0), (0, -1), (-1, 0)]
            .into_iter()
            .filter_map(move |(dx, dy)| {
                let nx = x as i64 + dx;
                let ny = y as i64 + dy;
                (nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h)
                    .then_some((nx as usize, ny as usize))
            })
    }

    /// Flood fill from `region` through passable tiles, entering first
    /// through a tile of role `entry` when given; true when `goal` is reached.
    fn reaches(&self, region: &Region, entry: Option<Role>, goal: Role) -> bool {
        let mut seen = vec![false; self.tiles.len()];
        let mut queue: VecDeque<(usize, usize)> = region.cells().collect();
        for &(x, y) in &queue {
            seen[y * self.width + x] = true;
        }
        let inside = |x: usize, y: usize| {
            x >= region.x && x < region.x + region.w && y >= region.y && y < region.y + region.h
        };
        while let Some((x, y)) = queue.pop_front() {
            for (nx, ny) in self.neighbors(x, y) {
                let i = ny * self.width + nx;
                if seen[i] {
                    continue;
                }
                let role = self.tiles[i];
                if inside(x, y) && entry.is_some_and(|e| e != role) {
                    continue;
                }
                if role == goal {
                    return true;
                }
                if role.passable() {
                    seen[i] = true;
                    queue.push_back((nx, ny));
                }
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdderLayoutParams {
    pub fixup_width: usize,
    pub fixup_height: usize,
    /// Patches between consecutive qubits of a data row.
    pub stride: usize,
    pub maj_height: usize,
    /// Most data rows one register may occupy.
    pub max_rows_per_register: usize,
}

impl Default for AdderLayoutParams {
    fn default() -> Self {
        AdderLayoutParams {
            fixup_width: 4,
            fixup_height: 3,
            stride: 2,
            maj_height: 3,
            max_rows_per_register: 64,
        }
    }
}

/// Factories in front of and behind a central MAJ strip, each with two
/// fixup boxes on the strip side and a one-patch gap to its neighbours.
/// Target and offset rows alternate, separated by gap rows, with a gap
/// column on the left joining every gap row to the strip.
pub fn plan_adder_layout(
    m: usize,
    spec: &FactorySpec,
    n_factories: usize,
    params: &AdderLayoutParams,
) -> Result<Floorplan> {
    spec.validate()?;
    if m < 2 {
        return Err(Error::argument(format!(
            "adder width must be at least 2, got {m}"
        )));
    }
    if n_factories < 2 {
        return Err(Error::argument(
            "the adder layout needs at least 2 factories",
        ));
    }
    let p = params;
    if p.stride == 0 || p.maj_height == 0 || p.fixup_height == 0 || p.fixup_width == 0 {
        return Err(Error::argument("layout dimensions must be positive"));
    }
    if 2 * p.fixup_width + 1 > FACTORY_WIDTH {
        return Err(Error::argument(format!(
            "two fixup boxes of width {} do not fit beside a factory",
            p.fixup_width
        )));
    }
    let cols = n_factories.div_ceil(2);
    let width = cols * (FACTORY_WIDTH + 1) + 1;
    let per_row = (width - 1).div_ceil(p.stride);
    let rows_per_register = m.div_ceil(per_row);
    if rows_per_register > p.max_rows_per_register {
        let required = m.div_ceil(p.max_rows_per_register) * p.stride + 1;
        return Err(Error::capacity(format!(
            "{m}-bit registers need a data width of at least {required} patches, have {width}"
        )));
    }
    let data_rows = 2 * rows_per_register;
    let upper = data_rows.div_ceil(2);
    let lower = data_rows - upper;
    let band = FACTORY_HEIGHT + p.fixup_height + 1;
    let height = 2 * band + 2 * data_rows + p.maj_height;
    let mut plan = Floorplan::empty(PlanKind::Adder, width, height, spec.d2);

    let bottom_band = height - band;
    let mut factory = 0;
    for (side, count) in [(0, cols), (1, n_factories - cols)] {
        let (fy, uy, gy) = if side == 0 {
            (0, FACTORY_HEIGHT, FACTORY_HEIGHT + p.fixup_height)
        } else {
            (
                bottom_band + 1 + p.fixup_height,
                bottom_band + 1,
                bottom_band,
            )
        };
        for c in 0..=cols {
            plan.rect(Role::Gap, c * (FACTORY_WIDTH + 1), fy, 1, FACTORY_HEIGHT)?;
        }
        plan.rect(Role::Gap, 0, gy, width, 1)?;
        for c in 0..cols {
            let x0 = 1 + c * (FACTORY_WIDTH + 1);
            if c < count {
                plan.place(Region {
                    role: Role::CczFactory,
                    x: x0,
                    y: fy,
                    w: FACTORY_WIDTH,
                    h: FACTORY_HEIGHT,
                    owner: Some(factory),
                })?;
                let port_y = if side == 0 {
                    fy + FACTORY_HEIGHT - 1
                } else {
                    fy
                };
                plan.annotations.push(Annotation {
                    kind: AnnotationKind::FactoryPort,
                    x: x0 + FACTORY_WIDTH / 2,
                    y: port_y,
                    factory,
                });
                for k in 0..2 {
                    let fx = x0 + k * (p.fixup_width + 1);
                    plan.place(Region {
                        role: Role::FixupBox,
                        x: fx,
                        y: uy,
                        w: p.fixup_width,
                        h: p.fixup_height,
                        owner: Some(factory),
                    })?;
                    plan.annotations.push(Annotation {
                        kind: AnnotationKind::FixupChimney,
                        x: fx + p.fixup_width / 2,
                        y: uy + p.fixup_height / 2,
                        factory,
                    });
                    let gx = fx + p.fixup_width;
                    let gw = if k == 0 { 1 } else { x0 + FACTORY_WIDTH - gx };
                    plan.rect(Role::Gap, gx, uy, gw, p.fixup_height)?;
                }
                factory += 1;
            } else {
                plan.rect(Role::Gap, x0, fy, FACTORY_WIDTH, FACTORY_HEIGHT)?;
                plan.rect(Role::Gap, x0, uy, FACTORY_WIDTH, p.fixup_height)?;
            }
            plan.rect(Role::Gap, x0 - 1, uy, 1, p.fixup_height)?;
        }
        plan.rect(Role::Gap, width - 1, uy, 1, p.fixup_height)?;
    }

    // Data rows, alternating target and offset, each with a gap row on its
    // strip side.
    let maj_y = band + 2 * upper;
    plan.rect(Role::MajArea, 0, maj_y, width, p.maj_height)?;
    let mut placed = [0usize; 2];
    for r in 0..data_rows {
        let register = r % 2;
        let (row_y, gap_y) = if r < upper {
            let y = band + 2 * r;
            (y, y + 1)
        } else {
            let k = r - upper;
            let y = maj_y + p.maj_height + 2 * k;
            (y + 1, y)
        };
        plan.rect(Role::Gap, 0, gap_y, width, 1)?;
        plan.rect(Role::Gap, 0, row_y, 1, 1)?;
        let role = if register == 0 {
            Role::DataRowTarget
        } else {
            Role::DataRowOffset
        };
        plan.rect(role, 1, row_y, width - 1, 1)?;
        for x in 1..width {
            let slot = (x - 1) % p.stride == 0 && placed[register] < m;
            if slot {
                placed[register] += 1;
            } else {
                plan.set(x, row_y, Role::DataRowIdle);
            }
        }
    }
    debug_assert!(lower == 0 || maj_y + p.maj_height + 2 * lower <= bottom_band);
    Ok(plan)
}

/// Row tokens of a tiled pattern holding `rows` lookup rows: stop after the
/// last `L`, keep the access rows that follow it and a closing `R`.
fn pattern_rows(pattern: &str, rows: usize) -> Result<Vec<char>> {
    let tokens: Vec<char> = pattern.chars().collect();
    if tokens.is_empty() || tokens.iter().any(|c| !matches!(c, 'R' | 'L' | '_')) {
        return Err(Error::argument(format!(
            "pattern {pattern:?} must use only R, L and _"
        )));
    }
    if !tokens.contains(&'L') {
        return Err(Error::argument("pattern has no L rows"));
    }
    let mut out = Vec::new();
    let mut ls = 0;
    let mut it = tokens.iter().cycle().peekable();
    while ls < rows {
        let c = *it.next().expect("cycle");
        if c == 'L' {
            ls += 1;
        }
        out.push(c);
    }
    while it.peek() == Some(&&'_') {
        out.push('_');
        it.next();
    }
    if it.peek() == Some(&&'R') {
        out.push('R');
    }
    Ok(out)
}

pub const DEFAULT_PATTERN: &str = "R_L_L_R";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LookupLayoutParams {
    pub pattern: String,
    /// Patches per data row.
    pub row_width: usize,
    pub iteration_height: usize,
}

impl Default for LookupLayoutParams {
    fn default() -> Self {
        LookupLayoutParams {
            pattern: DEFAULT_PATTERN.to_string(),
            row_width: 32,
            iteration_height: 4,
        }
    }
}

/// Tiled rows between two vertical access corridors, with the iteration
/// area underneath. `rows` counts lookup (`L`) rows.
pub fn plan_lookup_layout(
    rows: usize,
    spec: &FactorySpec,
    params: &LookupLayoutParams,
) -> Result<Floorplan> {
    spec.validate()?;
    if rows == 0 {
        return Err(Error::argument("a lookup layout needs at least one row"));
    }
    if params.row_width == 0 || params.iteration_height == 0 {
        return Err(Error::argument("layout dimensions must be positive"));
    }
    let tokens = pattern_rows(&params.pattern, rows)?;
    let width = params.row_width + 2;
    let body = tokens.len();
    let height = body + params.iteration_height;
    let mut plan = Floorplan::empty(PlanKind::Lookup, width, height, spec.d2);
    plan.pattern = Some(params.pattern.clone());
    plan.rect(Role::AccessCorridor, 0, 0, 1, body)?;
    plan.rect(Role::AccessCorridor, width - 1, 0, 1, body)?;
    for (y, t) in tokens.iter().enumerate() {
        let role = match t {
            'R' => Role::DataRowTarget,
            'L' => Role::DataRowOffset,
            _ => Role::AccessRow,
        };
        plan.rect(role, 1, y, params.row_width, 1)?;
    }
    plan.rect(Role::IterationArea, 0, body, width, params.iteration_height)?;
    Ok(plan)
}

/// Runs every check applicable to the plan's kind.
pub fn validate(plan: &Floorplan) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_non_overlap(plan, &mut report);
    match plan.kind {
        PlanKind::Adder => validate_adder(plan, &mut report),
        PlanKind::Lookup => validate_lookup(plan, &mut report),
    }
    report
}

fn check_non_overlap(plan: &Floorplan, report: &mut ValidationReport) {
    let mut problems = Vec::new();
    for (i, a) in plan.regions.iter().enumerate() {
        for b in &plan.regions[i + 1..] {
            if a.overlaps(b) {
                problems.push(format!("{:?} overlaps {:?}", a.role, b.role));
            }
        }
    }
    let mut covered = vec![false; plan.tiles.len()];
    for r in &plan.regions {
        for (x, y) in r.cells() {
            if x >= plan.width || y >= plan.height {
                problems.push(format!("{:?} leaves the grid", r.role));
                continue;
            }
            covered[y * plan.width + x] = true;
            let t = plan.tile(x, y);
            let ok = t == r.role || (r.role.is_data_row() && t == Role::DataRowIdle);
            if !ok {
                problems.push(format!("tile ({x}, {y}) is {t:?} inside a {:?}", r.role));
            }
        }
    }
    let stray = plan
        .tiles
        .iter()
        .zip(&covered)
        .filter(|(t, c)| !**c && **t != Role::Unused)
        .count();
    if stray > 0 {
        problems.push(format!("{stray} tiles carry a role outside every region"));
    }
    report.push(
        "non_overlap",
        problems.is_empty(),
        problems.first().cloned().unwrap_or_default(),
    );
}

fn validate_adder(plan: &Floorplan, report: &mut ValidationReport) {
    let factories: Vec<&Region> = plan.regions_of(Role::CczFactory).collect();
    let shape_ok = factories
        .iter()
        .all(|f| f.w == FACTORY_WIDTH && f.h == FACTORY_HEIGHT);
    let area = plan.count_role(Role::CczFactory);
    report.push(
        "factory_footprint",
        shape_ok && area == factories.len() * FACTORY_PATCHES,
        format!("{} factories, {area} factory tiles", factories.len()),
    );

    let fixups: Vec<&Region> = plan.regions_of(Role::FixupBox).collect();
    let bad: Vec<usize> = factories
        .iter()
        .filter(|f| {
            let mine = fixups
                .iter()
                .filter(|u| u.owner == f.owner && u.adjacent(f))
                .count();
            mine != 2
        })
        .filter_map(|f| f.owner)
        .collect();
    report.push(
        "two_fixups_per_factory",
        bad.is_empty() && fixups.len() == 2 * factories.len(),
        format!(
            "{} fixup boxes for {} factories",
            fixups.len(),
            factories.len()
        ),
    );

    let gaps: Vec<&Region> = plan.regions.iter().filter(|r| r.role.passable()).collect();
    let isolated = factories
        .iter()
        .filter(|f| !gaps.iter().any(|g| g.adjacent(f)))
        .count();
    // Factories side by side in one band must have a gap between them.
    let mut unseparated = 0;
    for a in &factories {
        for b in &factories {
            if a.y == b.y && a.x + a.w <= b.x {
                let between = (a.x + a.w..b.x).any(|x| plan.tile(x, a.y).passable());
                if !between {
                    unseparated += 1;
                }
            }
        }
    }
    report.push(
        "factory_gaps",
        isolated == 0 && unseparated == 0,
        format!("{isolated} factories without a gap, {unseparated} unseparated pairs"),
    );

    let rows: Vec<&Region> = plan
        .regions
        .iter()
        .filter(|r| r.role.is_data_row())
        .collect();
    let unreachable = rows
        .iter()
        .filter(|r| !plan.reaches(r, None, Role::MajArea))
        .count();
    report.push(
        "reachability",
        !rows.is_empty() && unreachable == 0,
        format!(
            "{unreachable} of {} data rows cannot reach the MAJ strip",
            rows.len()
        ),
    );

    let kinds: Vec<Role> = {
        let mut rs: Vec<&Region> = rows.clone();
        rs.sort_by_key(|r| r.y);
        rs.iter().map(|r| r.role).collect()
    };
    let interleaved = kinds.len() >= 2 && kinds.windows(2).all(|w| w[0] != w[1]);
    report.push(
        "interleaved_rows",
        interleaved,
        format!("{} data rows", kinds.len()),
    );
}

fn validate_lookup(plan: &Floorplan, report: &mut ValidationReport) {
    let mut rows: Vec<&Region> = plan
        .regions
        .iter()
        .filter(|r| r.role.is_data_row() || r.role == Role::AccessRow)
        .collect();
    rows.sort_by_key(|r| r.y);
    let tokens: String = rows
        .iter()
        .map(|r| match r.role {
            Role::DataRowTarget => 'R',
            Role::DataRowOffset => 'L',
            _ => '_',
        })
        .collect();
    let expected = plan.pattern.as_deref().and_then(|p| {
        let ls = tokens.chars().filter(|&c| c == 'L').count();
        pattern_rows(p, ls)
            .ok()
            .map(|t| t.into_iter().collect::<String>())
    });
    let contiguous = rows.iter().enumerate().all(|(i, r)| r.y == rows[0].y + i);
    report.push(
        "pattern",
        expected.as_deref() == Some(tokens.as_str()) && contiguous,
        tokens.clone(),
    );

    let t: Vec<char> = tokens.chars().collect();
    let near_access = |i: usize| (i > 0 && t[i - 1] == '_') || (i + 1 < t.len() && t[i + 1] == '_');
    let lonely = (0..t.len())
        .filter(|&i| t[i] == 'L' && !near_access(i))
        .count();
    report.push(
        "l_rows_adjacent_to_access",
        lonely == 0,
        format!("{lonely} L rows without an access row"),
    );

    // In every full L_L group the middle access row serves both L rows.
    let pairs = t.windows(3).filter(|w| w == &['L', '_', 'L']).count();
    let expected_pairs = t.iter().filter(|&&c| c == 'L').count() / 2;
    let pattern_pairs = plan
        .pattern
        .as_deref()
        .map_or(0, |p| p.matches("L_L").count());
    report.push(
        "inner_access_shared",
        pattern_pairs == 0 || pairs == expected_pairs,
        format!("{pairs} inner access rows shared by two L rows"),
    );

    let corridors: Vec<&Region> = plan.regions_of(Role::AccessCorridor).collect();
    let open_ends = plan
        .regions_of(Role::AccessRow)
        .filter(|a| {
            let left = a.x > 0 && plan.tile(a.x - 1, a.y) == Role::AccessCorridor;
            let right = a.x + a.w < plan.width && plan.tile(a.x + a.w, a.y) == Role::AccessCorridor;
            !(left && right)
        })
        .count();
    report.push(
        "corridors_touch_access_rows",
        corridors.len() == 2 && open_ends == 0,
        format!(
            "{} corridors, {open_ends} access rows with an open end",
            corridors.len()
        ),
    );

    let data: Vec<&Region> = rows
        .iter()
        .copied()
        .filter(|r| r.role.is_data_row())
        .collect();
    let unreachable = data
        .iter()
        .filter(|r| !plan.reaches(r, Some(Role::AccessRow), Role::AccessCorridor))
        .count();
    report.push(
        "reachability",
        !data.is_empty() && unreachable == 0,
        format!(
            "{unreachable} of {} data rows cannot reach a corridor",
            data.len()
        ),
    );

    report.push(
        "iteration_area",
        plan.regions_of(Role::IterationArea).count() == 1,
        format!("{} tiles", plan.count_role(Role::IterationArea)),
    );
}

/// One step of the zig-zag: which data row the operating area sits on and
/// which way it moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepFrame {
    pub index: usize,
    pub row_y: usize,
    pub rightward: bool,
}

/// The sweep up (towards the strip) then back down, one frame per row pair.
pub fn sweep_frames(plan: &Floorplan) -> Vec<SweepFrame> {
    let mut ys: Vec<usize> = plan.regions_of(Role::DataRowTarget).map(|r| r.y).collect();
    ys.sort_unstable();
    let down: Vec<usize> = ys.iter().rev().copied().collect();
    ys.into_iter()
        .chain(down)
        .enumerate()
        .map(|(index, row_y)| SweepFrame {
            index,
            row_y,
            rightward: index % 2 == 0,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    /// Patches.
    pub w: u64,
    pub h: u64,
    /// Units of d cycles.
    pub t: u64,
}

impl Block {
    pub fn new(name: &str, w: u64, h: u64, t: u64) -> Self {
        Block {
            name: name.to_string(),
            w,
            h,
            t,
        }
    }

    pub fn volume(&self) -> u64 {
        self.w * self.h * self.t
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub components: Vec<(String, u64)>,
    pub total: u64,
}

pub fn volume_report(blocks: &[Block]) -> VolumeReport {
    let components: Vec<(String, u64)> = blocks
        .iter()
        .map(|b| (b.name.clone(), b.volume()))
        .collect();
    let total = components.iter().map(|c| c.1).sum();
    VolumeReport { components, total }
}

/// MAJ block bounding box.
pub fn maj_block() -> Block {
    Block::new("maj", 3, 3, 5)
}

/// Routing volume of the optimized and multiplexer delayed-choice CZs, with
/// column counts taken from the built circuits and a shared height.
pub fn routing_volume_comparison(height: u64) -> Result<(VolumeReport, Q)> {
    let optimized = build_delayed_choice_cz(CzChoice::Apply)?
        .routing_qubits
        .len() as u64;
    let mux = build_fowler_multiplexer_cz(CzChoice::Apply)?
        .routing_qubits
        .len() as u64;
    let report = volume_report(&[
        Block::new("delayed_choice_cz_routing", optimized, 1, height),
        Block::new("multiplexer_cz_routing", mux, 1, height),
    ]);
    let ratio = Q::new(
        report.components[1].1 as i128,
        report.components[0].1.max(1) as i128,
    );
    Ok((report, ratio))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Svg,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(ExportFormat::Svg),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::argument(format!("unknown export format {other:?}"))),
        }
    }
}

const TILE_PX: usize = 10;

pub fn export(plan: &Floorplan, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Json => {
            let mut s = serde_json::to_string_pretty(plan).expect("floorplan serializes");
            s.push('\n');
            s.into_bytes()
        }
        ExportFormat::Svg => to_svg(plan).into_bytes(),
    }
}

pub fn from_json(bytes: &[u8]) -> Result<Floorplan> {
    serde_json::from_slice(bytes).map_err(|e| Error::parse(e.line(), e.to_string()))
}

fn to_svg(plan: &Floorplan) -> String {
    let (w, h) = (plan.width * TILE_PX, plan.height * TILE_PX);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<g class="tiles">"#);
    for y in 0..plan.height {
        for x in 0..plan.width {
            let role = plan.tile(x, y);
            let _ = writeln!(
                s,
                r#"<rect class="tile {}" x="{}" y="{}" width="{TILE_PX}" height="{TILE_PX}" fill="{}"/>"#,
                role.name(),
                x * TILE_PX,
                y * TILE_PX,
                role.fill()
            );
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="regions" fill="none" stroke="black">"#);
    for r in &plan.regions {
        if matches!(r.role, Role::CczFactory | Role::FixupBox) {
            let _ = writeln!(
                s,
                r#"<rect class="region {}" x="{}" y="{}" width="{}" height="{}"/>"#,
                r.role.name(),
                r.x * TILE_PX,
                r.y * TILE_PX,
                r.w * TILE_PX,
                r.h * TILE_PX
            );
        }
    }
    let _ = writeln!(s, "</g>");
    for a in &plan.annotations {
        let class = match a.kind {
            AnnotationKind::FactoryPort => "factory_port",
            AnnotationKind::FixupChimney => "fixup_chimney",
        };
        let _ = writeln!(
            s,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}"/>"#,
            a.x * TILE_PX + TILE_PX / 2,
            a.y * TILE_PX + TILE_PX / 2,
            TILE_PX / 3
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

/// Share of tiles carrying a role other than `Unused`.
pub fn utilization(plan: &Floorplan) -> Q {
    let used = plan.tiles.iter().filter(|&&r| r != Role::Unused).count();
    Q::new(used as i128, plan.tiles.len().max(1) as i128)
}

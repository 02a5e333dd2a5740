//! Workloads for the benchmarks: the hospital example scaled to many wards
//! and days.

use std::fmt::Write;

use omd_core::{parse_ontology, Ontology};

const WARDS_PER_UNIT: usize = 4;
const UNITS_PER_INSTITUTION: usize = 3;
const NURSES: usize = 7;

const RULES: &str = r#"
tgd sigma1: Shifts(w, d; n, s), WardUnit(w, u) -> exists t: WorkingSchedules(u, d; n, t).
tgd sigma2: WorkingSchedules(u, d; n, t), WardUnit(w, u) -> exists s: Shifts(w, d; n, s).
tgd warddoc: WardDoc(ward; na, sp), WardUnit(ward, unit), UnitInstitution(unit, ins) -> HospDoc(ins; na, sp).
nc eta: WorkingSchedules("U0", d; n, s), DayMonth(d, "jan") -> bottom.
query Ward0(w): exists s: Shifts(w, "d0"; "nurse0", s).
query Doctors(ins, na): exists sp: HospDoc(ins; na, sp).
"#;

/// The hospital schema and rules with `wards` wards and `days` days of
/// shifts, one shift per ward and day. Consistent, and deterministic in its
/// arguments.
pub fn scaled_hospital(wards: usize, days: usize) -> Ontology {
    let units = wards.div_ceil(WARDS_PER_UNIT).max(1);
    let institutions = units.div_ceil(UNITS_PER_INSTITUTION).max(1);
    let mut s = String::from(
        "dimension Hospital { category Ward; category Unit; category Institution;
           rollup WardUnit: Ward -> Unit; rollup UnitInstitution: Unit -> Institution; }
         dimension Time { category Day; category Month; rollup DayMonth: Day -> Month; }
         relation WorkingSchedules(cat Unit unit, cat Day day; nurse, speciality);
         relation Shifts(cat Ward ward, cat Day day; nurse, shift);
         relation WardDoc(cat Ward ward; name, speciality);
         relation HospDoc(cat Institution ins; name, speciality);
         member Month sep; member Month jan;\n",
    );
    for i in 0..institutions {
        let _ = writeln!(s, "member Institution H{i};");
    }
    for u in 0..units {
        let _ = writeln!(
            s,
            "member Unit U{u}; edge UnitInstitution(U{u}, H{});",
            u / UNITS_PER_INSTITUTION
        );
    }
    for w in 0..wards {
        let _ = writeln!(
            s,
            "member Ward W{w}; edge WardUnit(W{w}, U{});",
            w / WARDS_PER_UNIT
        );
    }
    for d in 0..days {
        let _ = writeln!(s, "member Day d{d}; edge DayMonth(d{d}, sep);");
    }
    for w in 0..wards {
        for d in 0..days {
            let _ = writeln!(
                s,
                "data Shifts(W{w}, d{d}; nurse{}, s{});",
                (w + d) % NURSES,
                d % 3
            );
        }
        if w % 5 == 0 {
            let _ = writeln!(s, "data WardDoc(W{w}; doc{w}, cardio);");
        }
    }
    s.push_str(RULES);
    parse_ontology(&s, "scaled-hospital.omd").expect("generated ontology parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use omd_core::schema::validate_schema;
    use omd_core::{chase, ChaseConfig};

    #[test]
    fn scaled_ontology_is_valid_and_consistent() {
        let o = scaled_hospital(10, 3);
        assert!(validate_schema(&o).is_ok());
        assert_eq!(o.data.len(), 30 + 2);
        let r = chase(&o, &ChaseConfig::default()).unwrap();
        assert!(r.verdict.is_consistent());
        assert!(r.instance.len() > o.data.len());
    }
}

//! An incomplete decision table leaves its output null unless the table
//! declares a default.

use cdmn::engine::{solve, SolveResult};

const TABLE: &str = "Glossary Type\nName,Type,Values\nYesNo,String,\"Yes, No\"\nAge,Int,[0..120]\n\n\
    Glossary Constant\nName,Type\nAge of Person,Age\nPerson is Adult,YesNo\n\n\
    Adult,U{default}\nAge of Person,||,Person is Adult\n>= 18,,Yes\n\n\
    Person data table\n||,Age of Person\n,17\n";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for default in ["", ",default=No"] {
        let model = cdmn::compile_str(&TABLE.replace("{default}", default))?;
        let SolveResult::Models { models, .. } = solve(&model, &Default::default())?.result else {
            return Err("no model".into());
        };
        let adult = models[0].function_value("Person_is_Adult", &[]).cloned();
        println!("title `Adult,U{default}`: Person is Adult = {}", adult.unwrap());
    }
    Ok(())
}

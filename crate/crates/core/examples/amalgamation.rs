//! Strong amalgamation of two random class members over a shared edge.

use homogen::classd::{is_in_class_d, random_class_d, strong_amalgam, AmalgamProblem};
use homogen::structure::find_embeddings;
use homogen::structure::format::format_structure;

fn main() -> homogen::Result<()> {
    let b = random_class_d(4, 1);
    let c = random_class_d(5, 2);
    let shared = [0, 1];
    let (a, _) = b.induced_substructure(&shared)?;
    let Some(e) = find_embeddings(&a, &c).into_iter().next() else {
        println!("{} does not embed the shared part", c.name());
        return Ok(());
    };
    println!("shared part goes to {:?} in {}", e.map, c.name());
    let am = strong_amalgam(&AmalgamProblem::over_substructure(b, &shared, c, e.map)?)?;
    print!("{}", format_structure(&am.d));
    println!("B -> D {:?}", am.b_into_d.map);
    println!("C -> D {:?}", am.c_into_d.map);
    println!("in class: {}", is_in_class_d(&am.d));
    Ok(())
}

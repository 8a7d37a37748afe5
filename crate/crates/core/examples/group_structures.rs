//! Which catalog groups carry a class member on their own elements, and
//! the C4 or Klein subgroup that blocks the others.

use homogen::actions::{d_structure_on_group, GroupStructure};
use homogen::classd::is_in_class_d;
use homogen::perms::catalog;

fn main() -> homogen::Result<()> {
    for (name, g) in catalog::all() {
        match d_structure_on_group(g.clone())? {
            GroupStructure::Built { structure, action } => println!(
                "{name:>6} (order {:>2}): built, {} edges, in class {}, faithful {}",
                g.order(),
                structure.r().len(),
                is_in_class_d(&structure),
                action.is_faithful()
            ),
            GroupStructure::Refused(w) => {
                let elems: Vec<String> = w.elements.iter().map(|&i| g.element(i).to_string()).collect();
                println!("{name:>6} (order {:>2}): refused, {:?} subgroup {}", g.order(), w.kind, elems.join(" "));
            }
        }
    }
    Ok(())
}

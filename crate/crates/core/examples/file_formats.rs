//! Parsing and printing structures, groups and actions.

use homogen::perms::format::{format_action, format_group, parse_actions, parse_groups};
use homogen::structure::format::{format_structure, parse_structures};

const STRUCTURES: &str = "\
# vertices may be named; S lines list one tuple of each partner pair
structure A4
n 4
R a b
R b c
R c d
R d a
S a b c d
end
structure P3
flags undirected
n 3
R 0 1
R 1 2
end
";

const GROUPS: &str = "\
group C4
perm 4: 1 2 3 0
end
";

const ACTIONS: &str = "\
action halves over C4
points 2
map 0: 1 0
end
";

fn main() -> homogen::Result<()> {
    for m in parse_structures(STRUCTURES)? {
        let text = format_structure(&m);
        assert_eq!(parse_structures(&text)?, vec![m.clone()]);
        print!("{text}");
    }
    let groups = parse_groups(GROUPS)?;
    for g in &groups {
        print!("{}", format_group(&g.name, &g.group));
    }
    for a in parse_actions(ACTIONS, &groups)? {
        print!("{}", format_action(&a.name, &a.group_name, &a.action));
    }
    Ok(())
}

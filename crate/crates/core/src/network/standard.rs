//! Topologies that recur in examples and constructions.

use super::Network;

/// Two sources on a line: `s1 -> s2 -> rho`.
pub const LINE: &str = "\
node s1 source
node s2 source
node rho receiver
edge s1 s2
edge s2 rho
";

/// Two sources, each with its own edge to the receiver.
pub const DIRECT_PAIR: &str = "\
node s1 source
node s2 source
node rho receiver
edge s1 rho
edge s2 rho
";

/// The butterfly network with every edge reversed. Edge ids:
/// 0 s1->a, 1 s1->u, 2 s2->b, 3 s2->u, 4 u->w, 5 w->a, 6 w->b, 7 a->rho, 8 b->rho.
pub const REVERSE_BUTTERFLY: &str = "\
node s1 source
node s2 source
node a
node b
node u
node w
node rho receiver
edge s1 a
edge s1 u
edge s2 b
edge s2 u
edge u w
edge w a
edge w b
edge a rho
edge b rho
";

/// Text of the relay network: `s` sources, each with one edge to `v`, and `v -> rho`.
pub fn relay_text(s: usize) -> String {
    let mut text = String::new();
    for i in 1..=s {
        text += &format!("node s{i} source\n");
    }
    text += "node v\nnode rho receiver\n";
    for i in 1..=s {
        text += &format!("edge s{i} v\n");
    }
    text += "edge v rho\n";
    text
}

pub fn relay(s: usize) -> Network {
    Network::parse(&relay_text(s)).expect("relay network is valid")
}

pub fn line() -> Network {
    Network::parse(LINE).expect("line network is valid")
}

pub fn direct_pair() -> Network {
    Network::parse(DIRECT_PAIR).expect("two-edge network is valid")
}

pub fn reverse_butterfly() -> Network {
    Network::parse(REVERSE_BUTTERFLY).expect("reverse butterfly is valid")
}

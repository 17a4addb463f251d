//! Order-shaped renderings of the suffix-class tree.
//!
//! Every numeral sits at the node of the complete binary tree whose digit
//! string equals its own digits (zero sits at the empty root). Listing the
//! nodes in the right traversal lays the numbers out in ascending order:
//! in-order for the final-digits comparison, pre-order for the variant,
//! and a mirrored double tree for the signed extension. The text, DOT and
//! SVG emitters all walk the same listing, so a figure is faithful exactly
//! when the traversal is.

use num_bigint::BigInt;
use num_traits::One;

use crate::numerals::{DigitString, Numeral, Rational};
use crate::orders::{Element, OrderKind};

/// Output flavors for [`render`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Dot,
    Svg,
}

impl RenderFormat {
    pub fn token(self) -> &'static str {
        match self {
            RenderFormat::Text => "text",
            RenderFormat::Dot => "dot",
            RenderFormat::Svg => "svg",
        }
    }

    pub fn from_token(text: &str) -> Option<Self> {
        match text {
            "text" => Some(RenderFormat::Text),
            "dot" => Some(RenderFormat::Dot),
            "svg" => Some(RenderFormat::Svg),
            _ => None,
        }
    }
}

/// One suffix-class node: the residues mod 2^len valued `value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Node {
    len: u64,
    value: u64,
}

impl Node {
    fn string(self) -> DigitString {
        Numeral::from_u64(self.value).suffix(self.len)
    }

    /// The numeral whose own digits equal this node's string, if any:
    /// the root carries zero, and a longer node carries its value exactly
    /// when the string has no leading zero.
    fn carries(self) -> Option<u64> {
        if self.len == 0 {
            Some(0)
        } else if self.value >> (self.len - 1) & 1 == 1 {
            Some(self.value)
        } else {
            None
        }
    }

    fn zero_child(self) -> Node {
        Node { len: self.len + 1, value: self.value }
    }

    fn one_child(self) -> Node {
        Node { len: self.len + 1, value: self.value | 1 << self.len }
    }

    /// Horizontal position in half-units: the midpoint of the node's slice
    /// of the axis, doubled so it stays an integer down to the leaves.
    fn offset_half_units(self, depth: u64) -> u64 {
        let mut units = 0;
        for i in 1..=self.len {
            if self.value >> (i - 1) & 1 == 1 {
                units += 1 << (depth + 1 - i);
            }
        }
        units + (1 << (depth - self.len))
    }
}

/// Horizontal figure position of `n` in a depth-`depth` final-digits
/// rendering, in axis units: digit i contributes 2^(depth-i) and the node
/// midpoint adds 2^(depth-1-len). Strictly increasing along the order.
pub fn figure_offset(n: &Numeral, depth: u64) -> Rational {
    assert!(n.len() <= depth, "numeral {n} is deeper than the figure");
    let node = Node {
        len: n.len(),
        value: n.to_u64().expect("figure depths keep values word-sized"),
    };
    Rational::new(
        BigInt::from(node.offset_half_units(depth)),
        BigInt::one() + BigInt::one(),
    )
}

/// The traversal that lists a sign block's nodes in ascending order.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Walk {
    /// Zero child, node, one child: ascending final-digits order.
    InOrder,
    /// Node, zero child, one child: ascending variant order.
    PreOrder,
    /// One child, node, zero child: descending final-digits order, the
    /// shape of the negative block read left to right.
    Mirrored,
}

fn walk(node: Node, depth: u64, order: Walk, out: &mut Vec<Node>) {
    if node.len == depth {
        out.push(node);
        return;
    }
    match order {
        Walk::InOrder => {
            walk(node.zero_child(), depth, order, out);
            out.push(node);
            walk(node.one_child(), depth, order, out);
        }
        Walk::PreOrder => {
            out.push(node);
            walk(node.zero_child(), depth, order, out);
            walk(node.one_child(), depth, order, out);
        }
        Walk::Mirrored => {
            walk(node.one_child(), depth, order, out);
            out.push(node);
            walk(node.zero_child(), depth, order, out);
        }
    }
}

/// The sign blocks of a rendering, each listing its nodes ascending.
fn blocks(kind: OrderKind, depth: u64) -> Vec<(Option<bool>, Vec<Node>)> {
    let root = Node { len: 0, value: 0 };
    let list = |order: Walk| {
        let mut out = Vec::with_capacity((1 << (depth + 1)) - 1);
        walk(root, depth, order, &mut out);
        out
    };
    match kind {
        OrderKind::FinalDigits => vec![(None, list(Walk::InOrder))],
        OrderKind::Variant => vec![(None, list(Walk::PreOrder))],
        OrderKind::SignedFinalDigits => vec![
            (Some(true), list(Walk::Mirrored)),
            (Some(false), list(Walk::InOrder)),
        ],
    }
}

/// The numeral carried by `node` under the block's sign. In the signed
/// figure zero sits between the blocks rather than at either root, so the
/// sign blocks carry strictly signed values only.
fn carried(node: Node, negative: Option<bool>) -> Option<Element> {
    let value = node.carries()?;
    match negative {
        Some(_) if value == 0 => None,
        Some(true) => Some(Element::int(-(value as i64))),
        Some(false) => Some(Element::int(value as i64)),
        None => Some(Element::nat(value)),
    }
}

/// The numbers a rendering displays, in left-to-right (ascending) order.
pub fn rendered_numbers(kind: OrderKind, depth: u64) -> Vec<Element> {
    let mut out = Vec::new();
    for (i, (sign, nodes)) in blocks(kind, depth).iter().enumerate() {
        if i == 1 {
            out.push(Element::int(0));
        }
        out.extend(nodes.iter().filter_map(|n| carried(*n, *sign)));
    }
    out
}

fn node_label(node: Node) -> String {
    if node.len == 0 {
        "ε".to_string()
    } else {
        node.string().to_string()
    }
}

/// Render the depth-`depth` tree of `kind` in the requested format.
pub fn render(kind: OrderKind, depth: u64, format: RenderFormat) -> String {
    assert!((1..=12).contains(&depth), "render depths run 1..=12");
    match format {
        RenderFormat::Text => render_text(kind, depth),
        RenderFormat::Dot => render_dot(kind, depth),
        RenderFormat::Svg => render_svg(kind, depth),
    }
}

fn render_text(kind: OrderKind, depth: u64) -> String {
    let mut out = String::new();
    for (i, (sign, nodes)) in blocks(kind, depth).into_iter().enumerate() {
        if i == 1 {
            out.push_str("0 [0]\n");
        }
        for node in nodes {
            let indent = "  ".repeat(node.len as usize);
            let label = match sign {
                Some(true) => format!("-({})", node_label(node)),
                Some(false) => format!("+({})", node_label(node)),
                None => node_label(node),
            };
            out.push_str(&indent);
            out.push_str(&label);
            if let Some(e) = carried(node, sign) {
                out.push_str(&format!(" [{e}]"));
            }
            out.push('\n');
        }
    }
    out
}

fn render_dot(kind: OrderKind, depth: u64) -> String {
    let mut out = String::from("digraph suffix_tree {\n");
    out.push_str("  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n");
    for (i, (sign, nodes)) in blocks(kind, depth).into_iter().enumerate() {
        if i == 1 {
            out.push_str("  z0 [label=\"0\"];\n");
        }
        let prefix = match sign {
            Some(true) => "m",
            Some(false) => "p",
            None => "c",
        };
        let id = |n: Node| format!("{prefix}{}_{}", n.len, n.value);
        for node in &nodes {
            let mut label = node_label(*node);
            if let Some(e) = carried(*node, sign) {
                label.push_str(&format!("\\n{e}"));
            }
            out.push_str(&format!("  {} [label=\"{label}\"];\n", id(*node)));
        }
        for node in &nodes {
            if node.len < depth {
                out.push_str(&format!("  {} -> {};\n", id(*node), id(node.zero_child())));
                out.push_str(&format!("  {} -> {};\n", id(*node), id(node.one_child())));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Pixels per half-unit of horizontal offset.
const HALF_UNIT_PX: u64 = 12;
const LEVEL_PX: u64 = 56;
const MARGIN_PX: u64 = 30;
/// Half-unit gap between the sign blocks of a signed figure.
const BLOCK_GAP: u64 = 6;

fn render_svg(kind: OrderKind, depth: u64) -> String {
    let span = 1u64 << (depth + 1);
    let blocks = blocks(kind, depth);
    let width_units = if blocks.len() == 2 { 2 * span + BLOCK_GAP } else { span };
    let x_of = |node: Node, sign: Option<bool>| -> u64 {
        let o = node.offset_half_units(depth);
        let units = match sign {
            Some(true) => span - o,
            Some(false) => span + BLOCK_GAP + o,
            None => o,
        };
        MARGIN_PX + units * HALF_UNIT_PX
    };
    let y_of = |node: Node| MARGIN_PX + node.len * LEVEL_PX;

    let width = 2 * MARGIN_PX + width_units * HALF_UNIT_PX;
    let height = 2 * MARGIN_PX + depth * LEVEL_PX + 20;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    );
    out.push_str(
        "  <style>line{stroke:#888;stroke-width:1}circle{fill:#333}\
         text{font:12px monospace;text-anchor:middle;fill:#111}</style>\n",
    );
    for (sign, nodes) in &blocks {
        for node in nodes {
            if node.len < depth {
                for child in [node.zero_child(), node.one_child()] {
                    out.push_str(&format!(
                        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                        x_of(*node, *sign),
                        y_of(*node),
                        x_of(child, *sign),
                        y_of(child),
                    ));
                }
            }
        }
    }
    for (sign, nodes) in &blocks {
        for node in nodes {
            let (x, y) = (x_of(*node, *sign), y_of(*node));
            out.push_str(&format!(
                "  <circle cx=\"{x}\" cy=\"{y}\" r=\"3\"><title>{}</title></circle>\n",
                node_label(*node),
            ));
            if let Some(e) = carried(*node, *sign) {
                out.push_str(&format!("  <text x=\"{x}\" y=\"{}\">{e}</text>\n", y + 16));
            }
        }
    }
    if blocks.len() == 2 {
        let x = MARGIN_PX + (span + BLOCK_GAP / 2) * HALF_UNIT_PX;
        out.push_str(&format!(
            "  <circle cx=\"{x}\" cy=\"{MARGIN_PX}\" r=\"3\"><title>0</title></circle>\n"
        ));
        out.push_str(&format!("  <text x=\"{x}\" y=\"{}\">0</text>\n", MARGIN_PX + 16));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::compare;

    fn listed(kind: OrderKind, depth: u64) -> Vec<Element> {
        rendered_numbers(kind, depth)
    }

    #[test]
    fn depth_two_tree_lists_the_classes_in_comparison_order() {
        let text = render(OrderKind::FinalDigits, 2, RenderFormat::Text);
        let labels: Vec<&str> = text
            .lines()
            .map(|l| l.trim_start().split(' ').next().unwrap())
            .collect();
        assert_eq!(labels, ["00", "0", "10", "ε", "01", "1", "11"]);
        assert!(text.contains("10 [2]"));
        assert!(text.contains("ε [0]"));
        assert!(text.contains("1 [1]"));
        assert!(text.contains("11 [3]"));
    }

    #[test]
    fn every_depth_five_number_appears_in_ascending_order() {
        for kind in [
            OrderKind::FinalDigits,
            OrderKind::Variant,
            OrderKind::SignedFinalDigits,
        ] {
            let numbers = listed(kind, 5);
            let expected = match kind {
                OrderKind::SignedFinalDigits => 63,
                _ => 32,
            };
            assert_eq!(numbers.len(), expected, "{kind:?}");
            for pair in numbers.windows(2) {
                assert_eq!(
                    compare(kind, &pair[0], &pair[1]).unwrap(),
                    std::cmp::Ordering::Less,
                    "{kind:?}: {} then {}",
                    pair[0],
                    pair[1]
                );
            }
        }
    }

    #[test]
    fn variant_rendering_starts_at_zero() {
        let numbers = listed(OrderKind::Variant, 4);
        assert_eq!(numbers[0], Element::nat(0));
    }

    #[test]
    fn figure_offsets_follow_the_digit_formula() {
        // 0 at the axis midpoint, 1 centered in the right half, and the
        // deepest carried numbers at half-unit positions.
        let offset = |v: u64| figure_offset(&Numeral::from_u64(v), 5);
        assert_eq!(offset(0), Rational::from(BigInt::from(16)));
        assert_eq!(offset(1), Rational::from(BigInt::from(24)));
        assert_eq!(offset(2), Rational::from(BigInt::from(12)));
        assert_eq!(offset(3), Rational::from(BigInt::from(28)));
        assert_eq!(offset(16), Rational::new(BigInt::from(3), BigInt::from(2)));
    }

    #[test]
    fn signed_dot_has_a_full_tree_per_sign_block() {
        let dot = render(OrderKind::SignedFinalDigits, 3, RenderFormat::Dot);
        let m_nodes = dot.lines().filter(|l| l.trim_start().starts_with('m') && l.contains("label")).count();
        let p_nodes = dot.lines().filter(|l| l.trim_start().starts_with('p') && l.contains("label")).count();
        assert_eq!(m_nodes, 15);
        assert_eq!(p_nodes, 15);
        assert!(dot.starts_with("digraph"));
        assert!(dot.trim_end().ends_with('}'));
    }

    #[test]
    fn svg_positions_scale_the_exact_offsets() {
        let svg = render(OrderKind::FinalDigits, 3, RenderFormat::Svg);
        // 2 sits at node "10": 3 units = 6 half-units from the left edge.
        assert!(svg.contains("<text x=\"102\" y=\"158\">2</text>"), "{svg}");
        // Root carries 0 at the midpoint, 8 half-units.
        assert!(svg.contains("<text x=\"126\" y=\"46\">0</text>"), "{svg}");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}

//! Wire-level view of a term and the rewriting machinery.
//!
//! A `Net` forgets the layering: it keeps the generator occurrences and the
//! wires between them. Interchange-equivalent terms build identical nets (up
//! to node order, which the canonical layered form fixes), so the canonical
//! form of a term is computed by rebuilding layers from its net: every box
//! slides to the earliest layer its inputs allow, leftmost first; unit
//! elements sit directly below their consumer.
//!
//! Rule application is surgery on the net: locate the pattern's boxes with
//! their internal wiring, cut them out, stitch the replacement in across the
//! same boundary wires, and re-layer. Re-layering fails exactly when the
//! stitched net is no longer a plane diagram; such candidates are discarded.

use std::collections::HashMap;

use super::term::{Gen, Term};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Source {
    Input(usize),
    Node(usize, usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Sink {
    Output(usize),
    Node(usize, usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub gen: Gen,
    pub ins: Vec<usize>,
    pub outs: Vec<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct Net {
    pub n_inputs: usize,
    pub n_outputs: usize,
    pub nodes: Vec<Node>,
    pub producer: Vec<Source>,
    pub consumer: Vec<Sink>,
    pub input_wires: Vec<usize>,
    pub output_wires: Vec<usize>,
}

impl Net {
    pub fn from_term(term: &Term) -> Net {
        let mut producer: Vec<Source> = Vec::new();
        let mut consumer_slots: Vec<Option<Sink>> = Vec::new();
        let mut nodes: Vec<Node> = Vec::new();

        let mut live: Vec<usize> = (0..term.inputs())
            .inspect(|&i| {
                producer.push(Source::Input(i));
                consumer_slots.push(None);
            })
            .collect();

        for layer in term.layers() {
            let mut next: Vec<usize> = Vec::new();
            let mut cursor = 0usize;
            for &g in layer {
                if g == Gen::Id {
                    next.push(live[cursor]);
                    cursor += 1;
                    continue;
                }
                let (k, m) = g.arity();
                let node_idx = nodes.len();
                let ins: Vec<usize> = live[cursor..cursor + k].to_vec();
                for (slot, &w) in ins.iter().enumerate() {
                    consumer_slots[w] = Some(Sink::Node(node_idx, slot));
                }
                cursor += k;
                let outs: Vec<usize> = (0..m)
                    .map(|slot| {
                        let w = producer.len();
                        producer.push(Source::Node(node_idx, slot));
                        consumer_slots.push(None);
                        w
                    })
                    .collect();
                next.extend(&outs);
                nodes.push(Node { gen: g, ins, outs });
            }
            live = next;
        }

        for (slot, &w) in live.iter().enumerate() {
            consumer_slots[w] = Some(Sink::Output(slot));
        }
        let consumer = consumer_slots
            .into_iter()
            .map(|s| s.expect("every wire is consumed"))
            .collect();
        Net {
            n_inputs: term.inputs(),
            n_outputs: live.len(),
            nodes,
            producer,
            consumer,
            input_wires: (0..term.inputs()).collect(),
            output_wires: live,
        }
    }

    /// Rebuilds the canonical layered term: one box per layer, chosen by
    /// peeling the leftmost box whose outputs sit adjacent and in slot
    /// order in the boundary, working from the outputs down. Every
    /// generator has at least one output, so the peel cannot deadlock on a
    /// valid plane diagram; `None` means the net is not one.
    pub fn relayer(&self) -> Option<Term> {
        let mut boundary: Vec<usize> = self.output_wires.clone();
        let mut peeled = vec![false; self.nodes.len()];
        let mut layers_rev: Vec<Vec<Gen>> = Vec::new();

        loop {
            let mut found = None;
            for p in 0..boundary.len() {
                let w = boundary[p];
                let Source::Node(n, slot) = self.producer[w] else {
                    continue;
                };
                if peeled[n] {
                    return None; // a wire produced twice: malformed
                }
                let outs = &self.nodes[n].outs;
                if slot == 0 && boundary.get(p..p + outs.len()) == Some(&outs[..]) {
                    found = Some((p, n));
                    break;
                }
            }
            let Some((p, n)) = found else { break };
            let node = &self.nodes[n];
            let mut word = vec![Gen::Id; p];
            word.push(node.gen);
            word.extend(std::iter::repeat_n(
                Gen::Id,
                boundary.len() - p - node.outs.len(),
            ));
            layers_rev.push(word);
            boundary.splice(p..p + node.outs.len(), node.ins.iter().copied());
            peeled[n] = true;
        }

        if boundary != self.input_wires || !peeled.iter().all(|&x| x) {
            return None;
        }
        layers_rev.reverse();
        Term::new(self.n_inputs, layers_rev).ok()
    }
}

/// Canonical representative modulo the interchange law.
pub fn normal_form(term: &Term) -> Term {
    Net::from_term(term)
        .relayer()
        .expect("a valid term always re-layers")
}

/// All single-step rewrites of `term` replacing an occurrence of `from` by
/// `to`, each result in canonical form, in a deterministic order. `from` and
/// `to` must have equal boundary arities.
pub fn rewrite_all(term: &Term, from: &Term, to: &Term) -> Vec<Term> {
    debug_assert_eq!(from.inputs(), to.inputs());
    debug_assert_eq!(from.outputs(), to.outputs());
    if from.size() == 0 {
        rewrite_identity_pattern(term, from.inputs(), to)
    } else {
        rewrite_box_pattern(term, from, to)
    }
}

/// The pattern is a bundle of `k` parallel wires: splice `to` across any
/// `k` adjacent wires at any layer boundary.
fn rewrite_identity_pattern(term: &Term, k: usize, to: &Term) -> Vec<Term> {
    let mut results = Vec::new();
    let mut widths = vec![term.inputs()];
    for layer in term.layers() {
        widths.push(layer.iter().map(|g| g.arity().1).sum());
    }
    for (boundary, &width) in widths.iter().enumerate() {
        if width < k {
            continue;
        }
        for col in 0..=width - k {
            // build id^col # to # id^(width-col-k) as layers and splice
            let mut spliced = term.layers()[..boundary].to_vec();
            for to_layer in to.layers() {
                let mut word = vec![Gen::Id; col];
                word.extend(to_layer.iter().copied());
                word.extend(std::iter::repeat_n(Gen::Id, width - col - k));
                spliced.push(word);
            }
            spliced.extend(term.layers()[boundary..].iter().cloned());
            let candidate = Term::new(term.inputs(), spliced).expect("splice preserves arities");
            results.push(normal_form(&candidate));
        }
    }
    dedupe(results)
}

/// General pattern with boxes: match the pattern net inside the term net.
fn rewrite_box_pattern(term: &Term, from: &Term, to: &Term) -> Vec<Term> {
    let net = Net::from_term(term);
    let pattern = Net::from_term(from);
    let replacement = Net::from_term(to);

    // wires running straight through the pattern: input slot -> output slot
    let pass_pairs: Vec<(usize, usize)> = pattern
        .input_wires
        .iter()
        .enumerate()
        .filter_map(|(i, &w)| match pattern.consumer[w] {
            Sink::Output(j) => Some((i, j)),
            _ => None,
        })
        .collect();

    let mut results = Vec::new();
    let mut assignment: Vec<Option<usize>> = vec![None; pattern.nodes.len()];
    let mut used = vec![false; net.nodes.len()];
    match_nodes(
        &net,
        &pattern,
        &replacement,
        &pass_pairs,
        0,
        &mut assignment,
        &mut used,
        &mut results,
    );
    dedupe(results)
}

fn dedupe(mut terms: Vec<Term>) -> Vec<Term> {
    let mut seen = std::collections::HashSet::new();
    terms.retain(|t| seen.insert(t.clone()));
    terms
}

#[allow(clippy::too_many_arguments)]
fn match_nodes(
    net: &Net,
    pattern: &Net,
    replacement: &Net,
    pass_pairs: &[(usize, usize)],
    depth: usize,
    assignment: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    results: &mut Vec<Term>,
) {
    if depth == pattern.nodes.len() {
        // enumerate carrier wires for pattern pass-throughs: any wire not
        // touching the matched boxes, in wire order
        let image: Vec<usize> = assignment.iter().map(|a| a.expect("complete")).collect();
        let touches = |w: usize| -> bool {
            let p = matches!(net.producer[w], Source::Node(s, _) if image.contains(&s));
            let c = matches!(net.consumer[w], Sink::Node(s, _) if image.contains(&s));
            p || c
        };
        let mut anchors = vec![usize::MAX; pass_pairs.len()];
        fn choose(
            net: &Net,
            pattern: &Net,
            replacement: &Net,
            pass_pairs: &[(usize, usize)],
            assignment: &[Option<usize>],
            touches: &dyn Fn(usize) -> bool,
            anchors: &mut Vec<usize>,
            k: usize,
            results: &mut Vec<Term>,
        ) {
            if k == pass_pairs.len() {
                if let Some(result) =
                    try_surgery(net, pattern, replacement, assignment, pass_pairs, anchors)
                {
                    results.push(result);
                }
                return;
            }
            for w in 0..net.producer.len() {
                if touches(w) || anchors[..k].contains(&w) {
                    continue;
                }
                anchors[k] = w;
                choose(
                    net,
                    pattern,
                    replacement,
                    pass_pairs,
                    assignment,
                    touches,
                    anchors,
                    k + 1,
                    results,
                );
                anchors[k] = usize::MAX;
            }
        }
        choose(
            net,
            pattern,
            replacement,
            pass_pairs,
            assignment,
            &touches,
            &mut anchors,
            0,
            results,
        );
        return;
    }
    for candidate in 0..net.nodes.len() {
        if used[candidate] || net.nodes[candidate].gen != pattern.nodes[depth].gen {
            continue;
        }
        if !wiring_consistent(net, pattern, depth, candidate, assignment) {
            continue;
        }
        assignment[depth] = Some(candidate);
        used[candidate] = true;
        match_nodes(
            net,
            pattern,
            replacement,
            pass_pairs,
            depth + 1,
            assignment,
            used,
            results,
        );
        assignment[depth] = None;
        used[candidate] = false;
    }
}

/// Internal wires of the pattern must map onto identical wiring in the term;
/// only wires whose pattern endpoint is already assigned are constrained.
fn wiring_consistent(
    net: &Net,
    pattern: &Net,
    node: usize,
    candidate: usize,
    assignment: &[Option<usize>],
) -> bool {
    let pnode = &pattern.nodes[node];
    let cnode = &net.nodes[candidate];
    for (slot, &pw) in pnode.ins.iter().enumerate() {
        if let Source::Node(pm, pslot) = pattern.producer[pw] {
            if let Some(image) = assignment[pm] {
                if net.producer[cnode.ins[slot]] != Source::Node(image, pslot) {
                    return false;
                }
            }
        }
    }
    for (slot, &pw) in pnode.outs.iter().enumerate() {
        if let Sink::Node(pm, pslot) = pattern.consumer[pw] {
            if let Some(image) = assignment[pm] {
                if net.consumer[cnode.outs[slot]] != Sink::Node(image, pslot) {
                    return false;
                }
            }
        }
    }
    true
}

/// Validates the boundary of a complete match, performs the replacement and
/// re-layers. `None` when the match is not a legal plane-diagram position.
fn try_surgery(
    net: &Net,
    pattern: &Net,
    replacement: &Net,
    assignment: &[Option<usize>],
    pass_pairs: &[(usize, usize)],
    anchors: &[usize],
) -> Option<Term> {
    let image: Vec<usize> = assignment.iter().map(|a| a.expect("complete")).collect();
    let in_image = |n: usize| image.contains(&n);

    // boundary wires of the match, indexed like the pattern boundary
    let mut boundary_in = vec![usize::MAX; pattern.n_inputs];
    let mut boundary_out = vec![usize::MAX; pattern.n_outputs];
    for (p, &m) in image.iter().enumerate() {
        for (slot, &pw) in pattern.nodes[p].ins.iter().enumerate() {
            if let Source::Input(i) = pattern.producer[pw] {
                let w = net.nodes[m].ins[slot];
                // produced inside the match means this is not a boundary
                if let Source::Node(src, _) = net.producer[w] {
                    if in_image(src) {
                        return None;
                    }
                }
                boundary_in[i] = w;
            }
        }
        for (slot, &pw) in pattern.nodes[p].outs.iter().enumerate() {
            if let Sink::Output(j) = pattern.consumer[pw] {
                let w = net.nodes[m].outs[slot];
                if let Sink::Node(snk, _) = net.consumer[w] {
                    if in_image(snk) {
                        return None;
                    }
                }
                boundary_out[j] = w;
            }
        }
    }
    // pattern pass-throughs ride on the chosen carrier wires; the carrier
    // is split during stitching
    for (k, &(i, j)) in pass_pairs.iter().enumerate() {
        boundary_in[i] = anchors[k];
        boundary_out[j] = anchors[k];
    }
    if boundary_in
        .iter()
        .chain(&boundary_out)
        .any(|&w| w == usize::MAX)
    {
        return None;
    }

    // convexity: no directed path leaving the match and coming back
    let mut frontier: Vec<usize> = boundary_out
        .iter()
        .filter_map(|&w| match net.consumer[w] {
            Sink::Node(c, _) if !in_image(c) => Some(c),
            _ => None,
        })
        .collect();
    let mut seen = vec![false; net.nodes.len()];
    while let Some(n) = frontier.pop() {
        if seen[n] {
            continue;
        }
        seen[n] = true;
        if in_image(n) {
            return None;
        }
        for &w in &net.nodes[n].outs {
            if let Sink::Node(c, _) = net.consumer[w] {
                frontier.push(c);
            }
        }
    }

    // --- stitch the replacement in ---
    let mut node_map: HashMap<usize, usize> = HashMap::new(); // old net node -> new
    let mut survivors: Vec<usize> = Vec::new();
    for n in 0..net.nodes.len() {
        if !in_image(n) {
            node_map.insert(n, survivors.len());
            survivors.push(n);
        }
    }
    let repl_offset = survivors.len();

    // wires: survivors of the old net + fresh wires internal to the
    // replacement; pattern-internal wires disappear
    let mut wire_map: HashMap<usize, usize> = HashMap::new();
    let mut producer: Vec<Source> = Vec::new();
    let mut consumer: Vec<Sink> = Vec::new();
    let internal = |w: usize| -> bool {
        let from_inside = matches!(net.producer[w], Source::Node(s, _) if in_image(s));
        let into_inside = matches!(net.consumer[w], Sink::Node(c, _) if in_image(c));
        from_inside && into_inside
    };
    for w in 0..net.producer.len() {
        if internal(w) {
            continue;
        }
        let id = producer.len();
        wire_map.insert(w, id);
        producer.push(match net.producer[w] {
            Source::Input(i) => Source::Input(i),
            Source::Node(s, slot) if !in_image(s) => Source::Node(node_map[&s], slot),
            Source::Node(..) => Source::Input(usize::MAX), // patched below
        });
        consumer.push(match net.consumer[w] {
            Sink::Output(j) => Sink::Output(j),
            Sink::Node(c, slot) if !in_image(c) => Sink::Node(node_map[&c], slot),
            Sink::Node(..) => Sink::Output(usize::MAX), // patched below
        });
    }

    // surviving nodes, rewired into the new id space
    let mut nodes: Vec<Node> = survivors
        .iter()
        .map(|&n| {
            let node = &net.nodes[n];
            Node {
                gen: node.gen,
                ins: node.ins.iter().map(|w| wire_map[w]).collect(),
                outs: node.outs.iter().map(|w| wire_map[w]).collect(),
            }
        })
        .collect();
    for node in &replacement.nodes {
        nodes.push(Node {
            gen: node.gen,
            ins: Vec::new(),
            outs: Vec::new(),
        });
    }

    // boundary wires in the new numbering; a pattern pass-through splits
    // its carrier: the lower part keeps the producer and feeds the
    // replacement, a fresh upper part takes over the old consumer
    let mut resolved_in: Vec<usize> = boundary_in.iter().map(|w| wire_map[w]).collect();
    let mut resolved_out: Vec<usize> = boundary_out.iter().map(|w| wire_map[w]).collect();
    for (k, &(i, j)) in pass_pairs.iter().enumerate() {
        let carrier = wire_map[&anchors[k]];
        let upper = producer.len();
        producer.push(Source::Input(usize::MAX));
        consumer.push(consumer[carrier]);
        // the old consumer now takes the upper half of the split wire
        if let Sink::Node(c, slot) = consumer[carrier] {
            nodes[c].ins[slot] = upper;
        }
        consumer[carrier] = Sink::Output(usize::MAX);
        resolved_in[i] = carrier;
        resolved_out[j] = upper;
    }

    // fresh wires for replacement-internal connections
    let mut repl_wire: HashMap<usize, usize> = HashMap::new();
    for (w, src) in replacement.producer.iter().enumerate() {
        let to_node = matches!(replacement.consumer[w], Sink::Node(..));
        let from_node = matches!(src, Source::Node(..));
        if from_node && to_node {
            let id = producer.len();
            repl_wire.insert(w, id);
            producer.push(Source::Input(usize::MAX));
            consumer.push(Sink::Output(usize::MAX));
        }
    }

    // resolve a replacement wire to a new-net wire id
    let resolve = |w: usize| -> usize {
        if let Some(&id) = repl_wire.get(&w) {
            return id;
        }
        match (replacement.producer[w], replacement.consumer[w]) {
            (Source::Input(i), _) => resolved_in[i],
            (_, Sink::Output(j)) => resolved_out[j],
            _ => unreachable!("replacement wire neither internal nor boundary"),
        }
    };

    // a replacement input passed straight through to an output merges the
    // two boundary wires of the term
    let mut merged: HashMap<usize, usize> = HashMap::new(); // out-wire -> in-wire
    for (i, &win) in resolved_in.iter().enumerate() {
        let rw = replacement.input_wires[i];
        if let Sink::Output(j) = replacement.consumer[rw] {
            merged.insert(resolved_out[j], win);
        }
    }

    for (rn, rnode) in replacement.nodes.iter().enumerate() {
        let new_idx = repl_offset + rn;
        for (slot, &rw) in rnode.ins.iter().enumerate() {
            let w = resolve(rw);
            consumer[w] = Sink::Node(new_idx, slot);
            nodes[new_idx].ins.push(w);
        }
        for (slot, &rw) in rnode.outs.iter().enumerate() {
            let w = resolve(rw);
            producer[w] = Source::Node(new_idx, slot);
            nodes[new_idx].outs.push(w);
        }
    }

    // apply merges: redirect every reference to a merged out-wire
    if !merged.is_empty() {
        let target = |w: usize| -> usize { merged.get(&w).copied().unwrap_or(w) };
        for node in &mut nodes {
            for w in node.ins.iter_mut().chain(node.outs.iter_mut()) {
                *w = target(*w);
            }
        }
        for (&wout, &win) in &merged {
            consumer[win] = consumer[wout];
            // the merged wire id stays allocated but unreferenced
            producer[wout] = Source::Input(usize::MAX);
            consumer[wout] = Sink::Output(usize::MAX);
        }
    }

    // compact and finish: rebuild wire arrays without dangling ids; a wire
    // patched on only one side means the stitch went wrong
    let mut live_ids: Vec<usize> = Vec::new();
    let mut renumber: HashMap<usize, usize> = HashMap::new();
    for w in 0..producer.len() {
        let p_hole = producer[w] == Source::Input(usize::MAX);
        let c_hole = consumer[w] == Sink::Output(usize::MAX);
        if p_hole && c_hole {
            continue;
        }
        if p_hole || c_hole {
            return None;
        }
        renumber.insert(w, live_ids.len());
        live_ids.push(w);
    }
    let producer: Vec<Source> = live_ids.iter().map(|&w| producer[w]).collect();
    let consumer: Vec<Sink> = live_ids.iter().map(|&w| consumer[w]).collect();
    let nodes: Vec<Node> = nodes
        .into_iter()
        .map(|mut n| {
            for w in n.ins.iter_mut().chain(n.outs.iter_mut()) {
                *w = renumber[w];
            }
            n
        })
        .collect();

    let mut input_wires = vec![usize::MAX; net.n_inputs];
    let mut output_wires = vec![usize::MAX; net.n_outputs];
    for (w, src) in producer.iter().enumerate() {
        if let Source::Input(i) = src {
            if *i != usize::MAX {
                input_wires[*i] = w;
            }
        }
    }
    for (w, snk) in consumer.iter().enumerate() {
        if let Sink::Output(j) = snk {
            if *j != usize::MAX {
                output_wires[*j] = w;
            }
        }
    }
    if input_wires.contains(&usize::MAX) || output_wires.contains(&usize::MAX) {
        return None;
    }

    let stitched = Net {
        n_inputs: net.n_inputs,
        n_outputs: net.n_outputs,
        nodes,
        producer,
        consumer,
        input_wires,
        output_wires,
    };
    stitched.relayer()
}

import init, { analyze, random_tree, spectrum } from "./pkg/dng_web.js";

const PRESETS = {
  "line, W = middle point": '{"kind":"affine","ground":[1,2,3],"data":{"dim":1,"coords":{"1":[0],"2":[1],"3":[2]}},"winning":[2]}',
  "triangle with interior point": '{"kind":"affine","ground":[1,2,3,4],"data":{"dim":2,"coords":{"1":[0,0],"2":[4,0],"3":[0,4],"4":[1,1]}},"winning":[2,3,4]}',
  "star, W = centre + leaf": '{"kind":"tree_vertex","ground":[1,2,3],"data":{"edges":[[1,2],[1,3]]},"winning":[1,2]}',
  "ten-vertex tree": '{"kind":"tree_vertex","ground":[1,2,3,4,5,6,7,8,9,10],"data":{"edges":[[1,2],[2,3],[3,4],[3,5],[1,6],[6,7],[7,8],[7,9],[6,10]]},"winning":[4,10]}',
  "tree edges, table gap": '{"kind":"tree_edge","ground":["A","B","C","D","E","F","G","H","I"],"data":{"edges":[[1,2],[3,2],[4,3],[5,3],[1,6],[6,7],[7,8],[7,9],[10,6]]},"winning":["A"]}',
};

const $ = (id) => document.getElementById(id);
const NS = "http://www.w3.org/2000/svg";

function el(name, attrs, text) {
  const e = document.createElementNS(NS, name);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

function clear(svg) {
  while (svg.firstChild) svg.removeChild(svg.firstChild);
}

// Places nodes in rows by layer, evenly spaced.
function layout(layers, width, height) {
  const rows = new Map();
  layers.forEach((l, i) => rows.set(l, [...(rows.get(l) || []), i]));
  const depth = Math.max(...layers) + 1;
  const pos = [];
  for (const [l, ids] of rows) {
    ids.forEach((id, k) => {
      pos[id] = [((k + 1) * width) / (ids.length + 1), 30 + (l * (height - 60)) / Math.max(depth - 1, 1)];
    });
  }
  return pos;
}

function drawDiagram(d) {
  const svg = $("diagram");
  clear(svg);
  if (d.error) {
    svg.appendChild(el("text", { x: 10, y: 20, class: "error" }, d.error));
    return;
  }
  const w = +svg.getAttribute("width");
  const h = +svg.getAttribute("height");
  const pos = layout(d.classes.map((c) => c.layer), w, h);
  for (const [a, b] of d.edges) {
    svg.appendChild(el("line", { x1: pos[a][0], y1: pos[a][1], x2: pos[b][0], y2: pos[b][1], stroke: "#999" }));
  }
  d.classes.forEach((c, i) => {
    const [x, y] = pos[i];
    const fill = c.terminal ? "#ffe9b3" : "#e3efff";
    svg.appendChild(el("rect", { x: x - 48, y: y - 15, width: 96, height: 30, rx: 4, fill, stroke: "#557" }));
    svg.appendChild(el("text", { x, y: y - 2, "text-anchor": "middle", "font-size": 10 }, c.label));
    svg.appendChild(el("text", { x, y: y + 10, "text-anchor": "middle", "font-size": 10 }, `(${c.pty}; ${c.nim0},${c.nim1})`));
  });
}

// Vertex trees only: BFS layers from the first vertex.
function drawTree(inst) {
  const svg = $("tree");
  clear(svg);
  if (inst.kind !== "tree_vertex") {
    svg.appendChild(el("text", { x: 10, y: 20 }, `${inst.kind}: no picture`));
    return;
  }
  const ground = inst.ground.map(String);
  const idx = new Map(ground.map((g, i) => [g, i]));
  const adj = ground.map(() => []);
  const edges = inst.data.edges.map(([a, b]) => [idx.get(String(a)), idx.get(String(b))]);
  for (const [a, b] of edges) {
    adj[a].push(b);
    adj[b].push(a);
  }
  const layer = ground.map(() => -1);
  layer[0] = 0;
  const queue = [0];
  while (queue.length) {
    const v = queue.shift();
    for (const u of adj[v]) if (layer[u] < 0) { layer[u] = layer[v] + 1; queue.push(u); }
  }
  const pos = layout(layer, +svg.getAttribute("width"), +svg.getAttribute("height"));
  for (const [a, b] of edges) {
    svg.appendChild(el("line", { x1: pos[a][0], y1: pos[a][1], x2: pos[b][0], y2: pos[b][1], stroke: "#555" }));
  }
  const winning = new Set(inst.winning.map(String));
  ground.forEach((g, i) => {
    const [x, y] = pos[i];
    svg.appendChild(el("circle", { cx: x, cy: y, r: 12, fill: winning.has(g) ? "#c33" : "#fff", stroke: "#333" }));
    svg.appendChild(el("text", { x, y: y + 4, "text-anchor": "middle", "font-size": 11, fill: winning.has(g) ? "#fff" : "#000" }, g));
  });
}

function describe(r) {
  const lines = [
    `nim value ${r.brute} (brute force), ${r.quotient} (structure quotient)`,
    `outcome ${r.outcome === "N" ? "N: first player wins" : "P: second player wins"}`,
  ];
  const f = r.formula;
  if (f.status === "ok") {
    lines.push(`closed form ${f.nim} [${f.case_id}]${f.signature ? ` signature ${f.signature}` : ""}`);
    if (f.erratum) lines.push(`table disagrees: ${f.erratum.class}: ${f.erratum.note}`);
  } else if (f.status === "table_gap") {
    lines.push(`closed form: no table row for signature ${f.signature} [${f.case_id}]`);
  } else {
    lines.push(`closed form not applicable: ${f.detail}`);
  }
  return lines.join("\n");
}

function solve() {
  const out = $("result");
  out.className = "";
  try {
    const r = JSON.parse(analyze($("instance").value));
    out.textContent = describe(r);
    drawTree(r.instance);
    drawDiagram(r.diagram);
  } catch (e) {
    out.className = "error";
    out.textContent = String(e.message || e);
    clear($("tree"));
    clear($("diagram"));
  }
}

function scan() {
  const table = $("spectrum");
  table.innerHTML = "";
  try {
    const s = JSON.parse(spectrum($("family").value, +$("max-n").value));
    table.insertAdjacentHTML("beforeend", `<tr><th colspan="2">${s.instances} games</th></tr><tr><th>nim</th><th>smallest witness</th></tr>`);
    for (const [v, w] of Object.entries(s.values)) {
      const row = document.createElement("tr");
      row.append(Object.assign(document.createElement("td"), { textContent: v }));
      row.append(Object.assign(document.createElement("td"), { textContent: w.instance }));
      table.append(row);
    }
  } catch (e) {
    table.innerHTML = `<tr><td class="error">${e.message || e}</td></tr>`;
  }
}

await init();
const preset = $("preset");
for (const name of Object.keys(PRESETS)) preset.append(new Option(name, name));
preset.addEventListener("change", () => { $("instance").value = PRESETS[preset.value]; solve(); });
$("solve").addEventListener("click", solve);
$("random").addEventListener("click", () => {
  try {
    $("instance").value = random_tree(+$("tree-n").value, +$("tree-seed").value);
    solve();
  } catch (e) {
    $("result").textContent = String(e.message || e);
  }
});
$("scan").addEventListener("click", scan);
$("instance").value = PRESETS[preset.value];
solve();

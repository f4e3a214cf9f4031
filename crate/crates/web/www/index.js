import init, { tsp_demo, bpp_demo, dkp_demo } from "./pkg/dcopt_web.js";

const $ = (id) => document.getElementById(id);
const canvas = $("view");
const ctx = canvas.getContext("2d");
const LEFT = "#1f6fb4";
const RIGHT = "#d9731a";
const ADDED = "#2a9d3a";

function num(id) {
  return Number($(id).value);
}

function call(f) {
  $("error").textContent = "";
  try {
    return JSON.parse(f());
  } catch (e) {
    $("error").textContent = String(e.message ?? e);
    return null;
  }
}

function stats(lines) {
  $("stats").textContent = lines.join("\n");
}

function clear() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
}

// TSP

function project(points) {
  const pad = 30;
  const size = Math.min(canvas.width, canvas.height) - 2 * pad;
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const [x0, x1, y0, y1] = [Math.min(...xs), Math.max(...xs), Math.min(...ys), Math.max(...ys)];
  const span = Math.max(x1 - x0, y1 - y0) || 1;
  const left = (canvas.width - size) / 2;
  return points.map(([x, y]) => [left + ((x - x0) / span) * size, pad + ((y1 - y) / span) * size]);
}

function arrow(a, b, color, width = 1.5, dash = []) {
  ctx.strokeStyle = color;
  ctx.fillStyle = color;
  ctx.lineWidth = width;
  ctx.setLineDash(dash);
  ctx.beginPath();
  ctx.moveTo(a[0], a[1]);
  ctx.lineTo(b[0], b[1]);
  ctx.stroke();
  ctx.setLineDash([]);
  const ang = Math.atan2(b[1] - a[1], b[0] - a[0]);
  const tip = [b[0] - 7 * Math.cos(ang), b[1] - 7 * Math.sin(ang)];
  ctx.beginPath();
  ctx.moveTo(tip[0], tip[1]);
  ctx.lineTo(tip[0] - 7 * Math.cos(ang - 0.4), tip[1] - 7 * Math.sin(ang - 0.4));
  ctx.lineTo(tip[0] - 7 * Math.cos(ang + 0.4), tip[1] - 7 * Math.sin(ang + 0.4));
  ctx.fill();
}

function cycleArcs(order) {
  return order.map((v, i) => [v, order[(i + 1) % order.length]]);
}

const same = (a, b) => a[0] === b[0] && a[1] === b[1];

function runTsp() {
  const r = call(() => tsp_demo($("tsp-case").value, num("tsp-n"), num("tsp-seed")));
  if (!r) return;
  clear();
  const pos = project(r.points);
  if ($("tsp-full").checked) {
    for (const [u, v] of cycleArcs(r.full)) arrow(pos[u], pos[v], "#999", 1, [4, 4]);
  } else {
    for (const [tour, color] of [[r.left_tour, LEFT], [r.right_tour, RIGHT]]) {
      for (const arc of cycleArcs(tour)) {
        const removed = r.removed.some((x) => same(x, arc));
        arrow(pos[arc[0]], pos[arc[1]], color, removed ? 1 : 1.5, removed ? [5, 5] : []);
      }
    }
    for (const [u, v] of r.inserted) arrow(pos[u], pos[v], ADDED, 2.5);
  }
  const side = new Set(r.left);
  pos.forEach((p, v) => {
    ctx.fillStyle = side.has(v) ? LEFT : RIGHT;
    ctx.beginPath();
    ctx.arc(p[0], p[1], 5, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#222";
    ctx.fillText(String(v + 1), p[0] + 7, p[1] - 7);
  });
  stats([
    `oracle          ${r.oracle}`,
    `full tour       ${r.z_full.toFixed(4)}`,
    `merged tour     ${r.z_dc.toFixed(4)}   (dashed arcs cut, green arcs added)`,
    `S_f             ${r.s_f.toFixed(2)} %`,
    `T_f             ${r.t_f.toFixed(2)} %`,
  ]);
}

// Bin packing

function drawBins(bins, weights, top, height, label, splitAt) {
  const w = Math.min(40, (canvas.width - 20) / Math.max(bins.length, 1) - 4);
  ctx.fillStyle = "#222";
  ctx.fillText(label, 10, top - 6);
  bins.forEach((bin, b) => {
    const x = 10 + b * (w + 4);
    let y = top + height;
    ctx.strokeStyle = "#888";
    ctx.strokeRect(x, top, w, height);
    for (const j of bin) {
      const h = weights[j] * height;
      y -= h;
      ctx.fillStyle = splitAt === undefined ? "#7a9cc6" : b < splitAt ? LEFT : RIGHT;
      ctx.fillRect(x + 1, y, w - 2, h - 1);
    }
  });
}

function runBpp() {
  const r = call(() => bpp_demo($("bpp-alg").value, num("bpp-n"), num("bpp-seed")));
  if (!r) return;
  clear();
  drawBins(r.full, r.weights, 30, 200, `whole instance: ${r.full.length} bins`);
  drawBins(r.dc, r.weights, 290, 200, `two halves: ${r.dc.length} bins (left half blue, right half orange)`, r.dc_left_bins);
  stats([
    `volume bound    ${r.volume_bound}`,
    `full packing    ${r.full.length}`,
    `halves          ${r.dc.length}`,
    `S_f             ${r.s_f.toFixed(2)} %`,
    `T_f             ${r.t_f.toFixed(2)} %`,
  ]);
}

// Knapsack

function runDkp() {
  const r = call(() => dkp_demo(num("dkp-n"), num("dkp-d"), Number($("dkp-t").value), num("dkp-seed")));
  if (!r) return;
  clear();
  const n = r.order.length;
  const w = (canvas.width - 20) / n;
  const gmax = Math.max(...r.efficiency);
  const left = new Set(r.left);
  const full = new Set(r.full);
  const dc = new Set(r.dc);
  ctx.fillStyle = "#222";
  ctx.fillText("items by decreasing efficiency; bar height is efficiency", 10, 20);
  r.order.forEach((j, k) => {
    const x = 10 + k * w;
    const h = (r.efficiency[j] / gmax) * 320;
    ctx.fillStyle = left.has(j) ? LEFT : RIGHT;
    ctx.fillRect(x + 2, 360 - h, w - 4, h);
    ctx.fillStyle = "#222";
    ctx.fillText(String(j + 1), x + 2, 376);
    if (full.has(j)) ctx.fillRect(x + w / 2 - 4, 390, 8, 8);
    if (dc.has(j)) {
      ctx.fillStyle = ADDED;
      ctx.fillRect(x + w / 2 - 4, 410, 8, 8);
    }
  });
  ctx.fillStyle = "#222";
  ctx.fillText("chosen whole (black) and by halves (green)", 10, 440);
  stats([
    `capacities      ${r.capacities.join(" ")}`,
    `left half       ${r.left_capacities.join(" ")}`,
    `right half      ${r.right_capacities.join(" ")}`,
    `optimum         ${r.z_full}`,
    `halves          ${r.z_dc}`,
    `S_f             ${r.s_f.toFixed(2)} %`,
    `T_f             ${r.t_f.toFixed(2)} %`,
  ]);
}

const runners = { tsp: runTsp, bpp: runBpp, dkp: runDkp };
let current = "tsp";

function show(tab) {
  current = tab;
  for (const b of document.querySelectorAll("nav button")) b.classList.toggle("on", b.dataset.tab === tab);
  for (const t of Object.keys(runners)) $(t).classList.toggle("hidden", t !== tab);
  runners[tab]();
}

await init();
ctx.font = "12px system-ui, sans-serif";
for (const b of document.querySelectorAll("nav button")) b.addEventListener("click", () => show(b.dataset.tab));
$("tsp-run").addEventListener("click", runTsp);
$("tsp-full").addEventListener("change", runTsp);
$("bpp-run").addEventListener("click", runBpp);
$("dkp-run").addEventListener("click", runDkp);
for (const input of document.querySelectorAll("fieldset input, fieldset select")) {
  input.addEventListener("change", () => runners[current]());
}
show("tsp");

import init, { arc_family, bound_curve, reroute_frames } from "./pkg/tmgraph_demo.js";

const $ = (id) => document.getElementById(id);

function show(id, svg) {
  $(id).innerHTML = svg;
}

function fail(where, err) {
  $(where).textContent = `error: ${err.message ?? err}`;
}

function buildArc() {
  const n = Number($("arc-n").value);
  const res = Number($("arc-res").value);
  try {
    const r = JSON.parse(arc_family(n, res));
    const b = r.bound;
    $("arc-stats").textContent =
      `n=${r.n} e=${r.e} cr=${r.cr} separated=${r.separated}\n` +
      `bound applicable=${b.applicable} value=${b.bound ?? "-"} verdict=${b.satisfied ?? "n/a"}`;
    show("arc-view", r.svg);
  } catch (e) {
    fail("arc-stats", e);
  }
}

function plotBound() {
  try {
    const r = JSON.parse(bound_curve($("bound-style").value, Number($("bound-m").value),
      Number($("bound-n").value), Number($("bound-e").value), 200));
    const pts = r.points.filter((p) => p.bound !== null && p.bound > 0);
    $("bound-stats").textContent =
      `${r.style}: applicable for e > ${r.threshold}; alpha=${r.alpha.toExponential(4)} beta=${r.beta.toFixed(2)}`;
    if (pts.length < 2) {
      show("bound-view", "<p>bound not applicable in this range</p>");
      return;
    }
    // log-log plot of the bound against e
    const W = 900, H = 400, P = 50;
    const lx = pts.map((p) => Math.log10(p.e)), ly = pts.map((p) => Math.log10(p.bound));
    const [x0, x1] = [Math.min(...lx), Math.max(...lx)], [y0, y1] = [Math.min(...ly), Math.max(...ly)];
    const sx = (v) => P + (W - 2 * P) * (v - x0) / (x1 - x0 || 1);
    const sy = (v) => H - P - (H - 2 * P) * (v - y0) / (y1 - y0 || 1);
    const path = lx.map((v, i) => `${i ? "L" : "M"}${sx(v).toFixed(1)} ${sy(ly[i]).toFixed(1)}`).join(" ");
    show("bound-view",
      `<svg viewBox="0 0 ${W} ${H}" xmlns="http://www.w3.org/2000/svg">` +
      `<path d="${path}" fill="none" stroke="#264653" stroke-width="2"/>` +
      `<line x1="${P}" y1="${H - P}" x2="${W - P}" y2="${H - P}" stroke="#999"/>` +
      `<line x1="${P}" y1="${P}" x2="${P}" y2="${H - P}" stroke="#999"/>` +
      `<text x="${W / 2}" y="${H - 12}" text-anchor="middle">log10 e (${10 ** x0 | 0} .. ${10 ** x1 | 0})</text>` +
      `<text x="14" y="${H / 2}" transform="rotate(-90 14 ${H / 2})" text-anchor="middle">` +
      `log10 bound (${y0.toFixed(1)} .. ${y1.toFixed(1)})</text></svg>`);
  } catch (e) {
    fail("bound-stats", e);
  }
}

let frames = [];
let current = 0;

function showFrame() {
  const f = frames[current];
  if (!f) return;
  $("frame-stats").textContent =
    `[${current + 1}/${frames.length}] ${f.label}: n=${f.n} e=${f.e} cr=${f.cr} ` +
    `empty lenses=${f.empty_lenses} separated=${f.separated}`;
  show("frame-view", f.svg);
}

function runFrames() {
  try {
    frames = JSON.parse(reroute_frames($("gadget").value));
    current = 0;
    showFrame();
  } catch (e) {
    fail("frame-stats", e);
  }
}

async function main() {
  await init();
  $("status").textContent = "";
  $("arc-n").addEventListener("input", () => { $("arc-n-value").textContent = $("arc-n").value; });
  $("arc-go").addEventListener("click", buildArc);
  $("bound-go").addEventListener("click", plotBound);
  $("frames-go").addEventListener("click", runFrames);
  $("frame-prev").addEventListener("click", () => { current = Math.max(0, current - 1); showFrame(); });
  $("frame-next").addEventListener("click", () => { current = Math.min(frames.length - 1, current + 1); showFrame(); });
  buildArc();
  plotBound();
  runFrames();
}

main().catch((e) => fail("status", e));

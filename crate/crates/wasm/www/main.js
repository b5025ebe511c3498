import init, { magnitude_curve, interpolation_profile, styan_margins } from "./pkg/magnitude_wasm.js";

const T_MIN = 2 ** -6;
const T_MAX = 2 ** 6;
const SCALES = 97;
const WORLD = 4; // the point canvas spans [0, WORLD]^2

const $ = (id) => document.getElementById(id);

function show(id, text, isError = false) {
  const el = $(id);
  el.textContent = text;
  el.className = isError ? "out error" : "out";
}

// Plot helpers. `xs`/`ys` are arrays; NaN breaks a line.
function frame(canvas, xRange, yRange, xLabel, yLabel) {
  const ctx = canvas.getContext("2d");
  const pad = { l: 50, r: 12, t: 12, b: 34 };
  const w = canvas.width - pad.l - pad.r;
  const h = canvas.height - pad.t - pad.b;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad.l, pad.t, w, h);
  const sx = (x) => pad.l + ((x - xRange[0]) / (xRange[1] - xRange[0])) * w;
  const sy = (y) => pad.t + h - ((y - yRange[0]) / (yRange[1] - yRange[0])) * h;
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(xLabel, pad.l + w / 2 - 20, canvas.height - 6);
  ctx.fillText(yRange[1].toPrecision(3), 2, pad.t + 10);
  ctx.fillText(yRange[0].toPrecision(3), 2, pad.t + h);
  ctx.fillText(yLabel, 2, pad.t + h / 2);
  return { ctx, sx, sy };
}

function polyline(p, xs, ys, color, dashed = false) {
  const { ctx, sx, sy } = p;
  ctx.strokeStyle = color;
  ctx.setLineDash(dashed ? [5, 4] : []);
  ctx.beginPath();
  let pen = false;
  xs.forEach((x, i) => {
    if (!Number.isFinite(ys[i])) {
      pen = false;
      return;
    }
    if (pen) ctx.lineTo(sx(x), sy(ys[i]));
    else ctx.moveTo(sx(x), sy(ys[i]));
    pen = true;
  });
  ctx.stroke();
  ctx.setLineDash([]);
}

// Section 1: interactive point set.
let points = [];

function drawPoints() {
  const c = $("points");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  ctx.fillStyle = "#1565c0";
  for (const [x, y] of points) {
    ctx.beginPath();
    ctx.arc((x / WORLD) * c.width, c.height - (y / WORLD) * c.height, 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function updateCurve() {
  drawPoints();
  const canvas = $("curve");
  if (points.length === 0) {
    canvas.getContext("2d").clearRect(0, 0, canvas.width, canvas.height);
    show("curve-out", "no points");
    return;
  }
  try {
    const values = magnitude_curve(new Float64Array(points.flat()), 2, $("norm").value, T_MIN, T_MAX, SCALES);
    const logT = Array.from({ length: SCALES }, (_, k) => Math.log2(T_MIN) + (k * Math.log2(T_MAX / T_MIN)) / (SCALES - 1));
    const n = points.length;
    const p = frame(canvas, [logT[0], logT[SCALES - 1]], [0, n * 1.05], "log₂ t", "Mag");
    polyline(p, [logT[0], logT[SCALES - 1]], [n, n], "#999", true);
    polyline(p, logT, Array.from(values), "#c62828");
    const gaps = values.filter((v) => !Number.isFinite(v)).length;
    const mid = values[(SCALES - 1) / 2];
    show("curve-out", `n = ${n}, Mag(X) = ${mid.toFixed(6)}${gaps ? `, ${gaps} scales without a weighting` : ""}`);
  } catch (e) {
    show("curve-out", e.message, true);
  }
}

$("points").addEventListener("click", (ev) => {
  const c = ev.currentTarget;
  const r = c.getBoundingClientRect();
  const x = ((ev.clientX - r.left) / c.width) * WORLD;
  const y = (1 - (ev.clientY - r.top) / c.height) * WORLD;
  if (ev.shiftKey && points.length) {
    let best = 0;
    points.forEach((q, i) => {
      if (Math.hypot(q[0] - x, q[1] - y) < Math.hypot(points[best][0] - x, points[best][1] - y)) best = i;
    });
    points.splice(best, 1);
  } else {
    points.push([x, y]);
  }
  updateCurve();
});
$("norm").addEventListener("change", updateCurve);
$("clear").addEventListener("click", () => {
  points = [];
  updateCurve();
});
$("random").addEventListener("click", () => {
  points = Array.from({ length: 12 }, () => [Math.random() * WORLD, Math.random() * WORLD]);
  updateCurve();
});

// Section 2: interpolation profile.
function runInterpolation() {
  try {
    const flat = interpolation_profile(+$("interp-n").value, +$("interp-seed").value, +$("interp-stretch").value, 41);
    const t = [], mag = [], chord = [];
    for (let k = 0; k < flat.length; k += 3) {
      t.push(flat[k]);
      mag.push(flat[k + 1]);
      chord.push(flat[k + 2]);
    }
    const lo = Math.min(...mag), hi = Math.max(...chord);
    const pad = (hi - lo) * 0.1 || 0.1;
    const p = frame($("interp"), [0, 1], [lo - pad, hi + pad], "t", "Mag");
    polyline(p, t, chord, "#555", true);
    polyline(p, t, mag, "#2e7d32");
    const slack = Math.min(...chord.map((c, i) => c - mag[i]));
    show("interp-out", `Mag(X₀) = ${mag[0].toFixed(6)}, Mag(X₁) = ${mag[mag.length - 1].toFixed(6)}, min chord − Mag = ${slack.toExponential(3)}`);
  } catch (e) {
    show("interp-out", e.message, true);
  }
}
$("interp-run").addEventListener("click", runInterpolation);

// Section 3: Styan margins.
function runStyan() {
  try {
    const nMax = +$("styan-n").value;
    const flat = styan_margins(nMax, +$("styan-count").value, +$("styan-seed").value);
    const ns = [], margins = [];
    for (let k = 0; k < flat.length; k += 2) {
      ns.push(flat[k]);
      margins.push(flat[k + 1]);
    }
    const hi = Math.max(...margins, 1e-3);
    const p = frame($("styan"), [1, nMax + 1], [-0.05 * hi, hi * 1.05], "n", "margin");
    polyline(p, [1, nMax + 1], [0, 0], "#999", true);
    p.ctx.fillStyle = "#6a1b9a";
    ns.forEach((n, i) => p.ctx.fillRect(p.sx(n) - 2, p.sy(margins[i]) - 2, 4, 4));
    const worst = Math.min(...margins);
    show("styan-out", `${ns.length} matrices, smallest margin ${worst.toExponential(3)}`);
  } catch (e) {
    show("styan-out", e.message, true);
  }
}
$("styan-run").addEventListener("click", runStyan);

await init();
points = [[0.5, 0.5], [3.5, 0.5], [2, 3.2]];
updateCurve();
runInterpolation();
runStyan();

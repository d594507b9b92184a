import init, { regret_sweep, trajectories, inverse_decay } from "./pkg/horizon_demo.js";

const COLORS = {
  rhgd: "#1f77b4", rhag: "#d62728", mpc: "#2ca02c", ogd: "#9467bd",
  offline: "#222", theta: "#bbb", bound: "#888",
};
const FLOOR = 1e-9;

const $ = (id) => document.getElementById(id);

function bindOutput(id) {
  const input = $(id);
  const out = $(id + "-out");
  const sync = () => { out.textContent = input.value; };
  sync();
  input.addEventListener("input", sync);
  return input;
}

function legend(id, items) {
  $(id).innerHTML = items
    .map(([name, color, dashed]) =>
      `<span><i style="background:${dashed ? "repeating-linear-gradient(90deg," + color + " 0 5px,transparent 5px 8px)" : color}"></i>${name}</span>`)
    .join("");
}

// Draws polylines on a canvas. `series` entries: {xs, ys, color, dashed, dots}.
function plot(canvas, series, { logY = false, xLabel = "", yLabel = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height;
  const m = { l: 60, r: 20, t: 14, b: 40 };
  ctx.clearRect(0, 0, W, H);
  const tf = (y) => (logY ? Math.log10(Math.max(y, FLOOR)) : y);
  const pts = series.flatMap((s) => s.xs.map((x, i) => [x, s.ys[i]])).filter(([, y]) => y !== null && !Number.isNaN(y));
  let [x0, x1] = [Math.min(...pts.map((p) => p[0])), Math.max(...pts.map((p) => p[0]))];
  let [y0, y1] = [Math.min(...pts.map((p) => tf(p[1]))), Math.max(...pts.map((p) => tf(p[1])))];
  if (logY) { y0 = Math.floor(y0); y1 = Math.ceil(y1); }
  if (y1 <= y0) y1 = y0 + 1;
  if (x1 <= x0) x1 = x0 + 1;
  const px = (x) => m.l + ((x - x0) / (x1 - x0)) * (W - m.l - m.r);
  const py = (y) => m.t + ((y1 - tf(y)) / (y1 - y0)) * (H - m.t - m.b);

  ctx.font = "12px sans-serif";
  ctx.strokeStyle = "#ddd";
  ctx.fillStyle = "#444";
  ctx.textAlign = "right";
  const ticks = logY
    ? Array.from({ length: y1 - y0 + 1 }, (_, i) => y0 + i)
    : Array.from({ length: 6 }, (_, i) => y0 + (i * (y1 - y0)) / 5);
  for (const t of ticks) {
    const y = m.t + ((y1 - t) / (y1 - y0)) * (H - m.t - m.b);
    ctx.beginPath(); ctx.moveTo(m.l, y); ctx.lineTo(W - m.r, y); ctx.stroke();
    ctx.fillText(logY ? `1e${t}` : t.toFixed(2), m.l - 6, y + 4);
  }
  ctx.textAlign = "center";
  const step = Math.max(1, Math.ceil((x1 - x0) / 16));
  for (let x = Math.ceil(x0); x <= x1; x += step) ctx.fillText(String(x), px(x), H - m.b + 16);
  ctx.fillText(xLabel, (W + m.l) / 2, H - 6);
  ctx.save();
  ctx.translate(14, (H - m.b) / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(yLabel, 0, 0);
  ctx.restore();
  ctx.strokeStyle = "#333";
  ctx.strokeRect(m.l, m.t, W - m.l - m.r, H - m.t - m.b);

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.fillStyle = s.color;
    ctx.lineWidth = s.width ?? 2;
    ctx.setLineDash(s.dashed ? [6, 4] : []);
    ctx.beginPath();
    let pen = false;
    s.xs.forEach((x, i) => {
      const y = s.ys[i];
      if (y === null || Number.isNaN(y)) { pen = false; return; }
      if (pen) ctx.lineTo(px(x), py(y)); else ctx.moveTo(px(x), py(y));
      pen = true;
    });
    ctx.stroke();
    if (s.dots) {
      s.xs.forEach((x, i) => {
        const y = s.ys[i];
        if (y === null || Number.isNaN(y)) return;
        ctx.beginPath(); ctx.arc(px(x), py(y), 3, 0, 2 * Math.PI); ctx.fill();
      });
    }
  }
  ctx.setLineDash([]);
  ctx.lineWidth = 1;
}

function guarded(fn) {
  return () => {
    try {
      $("error").textContent = "";
      fn();
    } catch (e) {
      $("error").textContent = String(e);
    }
  };
}

function drawSweep() {
  const d = JSON.parse(regret_sweep(Number($("sweep-beta").value), Number($("sweep-w").value)));
  $("sweep-q").textContent = `Q_f = ${d.q_f.toFixed(1)}`;
  const xs = d.windows;
  plot($("sweep"), [
    { xs, ys: d.rhgd_bound, color: COLORS.rhgd, dashed: true, width: 1 },
    { xs, ys: d.rhag_bound, color: COLORS.rhag, dashed: true, width: 1 },
    { xs, ys: d.rhgd, color: COLORS.rhgd, dots: true },
    { xs, ys: d.rhag, color: COLORS.rhag, dots: true },
    { xs, ys: d.mpc, color: COLORS.mpc, dots: true },
  ], { logY: true, xLabel: "W", yLabel: "regret" });
  legend("sweep-legend", [
    ["RHGD", COLORS.rhgd], ["RHAG", COLORS.rhag], ["MPC", COLORS.mpc],
    ["RHGD bound", COLORS.rhgd, true], ["RHAG bound", COLORS.rhag, true],
  ]);
}

function drawTrajectories() {
  const d = JSON.parse(trajectories(Number($("traj-beta").value), Number($("traj-w").value)));
  const xs = d.theta.map((_, i) => i + 1);
  const series = [
    { xs, ys: d.theta, color: COLORS.theta, dots: true, width: 1 },
    { xs, ys: d.offline, color: COLORS.offline, width: 3 },
    { xs, ys: d.ogd, color: COLORS.ogd, dashed: true },
    { xs, ys: d.rhgd, color: COLORS.rhgd },
    { xs, ys: d.rhag, color: COLORS.rhag },
  ];
  const items = [["θ_t", COLORS.theta], ["offline", COLORS.offline], ["OGD", COLORS.ogd, true], ["RHGD", COLORS.rhgd], ["RHAG", COLORS.rhag]];
  if (d.mpc) {
    series.push({ xs, ys: d.mpc, color: COLORS.mpc });
    items.push(["MPC", COLORS.mpc]);
  }
  plot($("traj"), series, { xLabel: "stage t", yLabel: "x_t" });
  legend("traj-legend", items);
}

function drawInverse() {
  const d = JSON.parse(inverse_decay(Number($("inv-alpha").value), Number($("inv-beta").value), Number($("inv-t").value)));
  $("inv-rho").textContent = `ρ = ${d.rho.toFixed(4)}, row t = ${d.row}`;
  const xs = d.entries.map((_, i) => i);
  plot($("inv"), [
    { xs, ys: d.entries, color: COLORS.rhgd, dots: true },
    { xs, ys: d.lower_bound, color: COLORS.bound, dashed: true },
  ], { logY: true, xLabel: "τ", yLabel: "a(t, t+τ)" });
  legend("inv-legend", [["entries", COLORS.rhgd], ["geometric lower bound", COLORS.bound, true]]);
}

await init();
const sweep = guarded(drawSweep);
const traj = guarded(drawTrajectories);
const inv = guarded(drawInverse);
for (const id of ["sweep-beta", "sweep-w"]) bindOutput(id).addEventListener("input", sweep);
for (const id of ["traj-beta", "traj-w"]) bindOutput(id).addEventListener("input", traj);
for (const id of ["inv-alpha", "inv-beta", "inv-t"]) bindOutput(id).addEventListener("input", inv);
sweep();
traj();
inv();

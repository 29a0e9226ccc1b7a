use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kernelbench(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kernelbench"))
        .args(args)
        .current_dir(cwd)
        .env("KERNELBENCH_DATA", cwd.join("no-data"))
        .output()
        .expect("binary runs")
}

const SMALL: &str = r#"
kind = "tournament"
families = ["logComm", "SCCT", "For", "SP-CT"]
grid = 6
graphs = 4
seed = 5

[[tasks]]
type = "block"
nodes = 40
classes = 2
p_in = 0.4
p_out = 0.1

[[tasks]]
type = "block"
name = "four"
nodes = 48
classes = 4
p_in = 0.5
p_out = 0.1
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn same_seed_gives_identical_csvs_for_any_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.cfg", SMALL);
    for (workers, out) in [("1", "a"), ("3", "b")] {
        let o = kernelbench(&["run", &cfg, "--workers", workers, "--out", out], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for file in ["sweep.csv", "best.csv", "tournament.csv", "tournament_table.csv"] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        let b = fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs");
    }
    let manifest = |d: &str| {
        let text = fs::read_to_string(dir.path().join(d).join("manifest.json")).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["timestamp"].is_u64());
        v["timestamp"] = 0.into();
        v["config"]["out"] = "".into();
        v
    };
    assert_eq!(manifest("a"), manifest("b"));
}

#[test]
fn tournament_outputs_have_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.cfg", SMALL);
    let o = kernelbench(&["run", &cfg, "--out", "run"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let run = dir.path().join("run");

    let sweep = fs::read_to_string(run.join("sweep.csv")).unwrap();
    let mut lines = sweep.lines();
    assert_eq!(lines.next(), Some("task,family,param,graph_index,ari,error"));
    assert_eq!(lines.count(), 2 * 4 * 4 * 6);

    let long = fs::read_to_string(run.join("tournament.csv")).unwrap();
    assert!(long.starts_with("family,task,score\n"));
    // 4 families x 2 tasks, then one total row per family.
    assert_eq!(long.lines().count(), 1 + 8 + 4);
    let totals: i64 = long
        .lines()
        .filter(|l| l.contains(",total,"))
        .map(|l| l.rsplit(',').next().unwrap().parse::<i64>().unwrap())
        .sum();
    assert_eq!(totals, 0);

    let wide = fs::read_to_string(run.join("tournament_table.csv")).unwrap();
    let header = wide.lines().next().unwrap();
    assert_eq!(header, "family,\"G(40,(2)0.4,0.1)\",four,total");
    assert_eq!(wide.lines().count(), 5);

    let svg = fs::read_to_string(run.join("sweep_1.svg")).unwrap();
    assert!(svg.contains("<!-- data"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["config"]["graphs"], 4);
    assert!(manifest["config"].get("workers").is_none());
}

#[test]
fn reject_run_writes_curves_on_the_fixed_grid() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
kind = "reject"
families = ["logComm", "SP-CT"]
grid = 5
graphs = 3

[reject]
params = { "SP-CT" = 0.5 }

[[tasks]]
type = "block"
nodes = 40
classes = 2
p_in = 0.4
p_out = 0.1
"#;
    let cfg = write_config(dir.path(), "reject.cfg", text);
    let o = kernelbench(&["run", &cfg, "--out", "r"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let curves = fs::read_to_string(dir.path().join("r/reject.csv")).unwrap();
    assert!(curves.starts_with("family,x,y_mean\n"));
    assert_eq!(curves.lines().filter(|l| l.starts_with("logComm,")).count(), 1001);
    assert!(curves.lines().any(|l| l == "SP-CT,1,1"));
    let auc = fs::read_to_string(dir.path().join("r/reject_auc.csv")).unwrap();
    assert!(auc.lines().any(|l| l.starts_with("SP-CT,0.5,")));
    assert!(dir.path().join("r/reject.svg").is_file());
}

#[test]
fn invalid_configs_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        SMALL.replace(r#"["logComm", "SCCT", "For", "SP-CT"]"#, "[]"),
        SMALL.replace("seed = 5", "seed = 5\ncolour = \"red\""),
        SMALL.replace(r#"["logComm", "SCCT", "For", "SP-CT"]"#, r#"["logComm", "PageRank"]"#),
        SMALL.replace("p_out = 0.1\n\n[[tasks]]", "p_out = 1.1\n\n[[tasks]]"),
        SMALL.replace("grid = 6", "grid = 0"),
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("bad{i}.cfg"), text);
        let o = kernelbench(&["run", &cfg, "--out", "never"], dir.path());
        assert_eq!(o.status.code(), Some(2), "case {i}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).contains("invalid config"));
    }
    assert!(!dir.path().join("never").exists());
}

#[test]
fn missing_dataset_aborts_before_computing() {
    let dir = tempfile::tempdir().unwrap();
    let text = "kind = \"datasets\"\n[[tasks]]\ntype = \"dataset\"\nname = \"zachary\"\n\n[[tasks]]\ntype = \"dataset\"\nname = \"polbooks\"\n";
    let cfg = write_config(dir.path(), "data.cfg", text);
    let o = kernelbench(&["run", &cfg, "--out", "d"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("polbooks"));
    assert!(!dir.path().join("d/sweep.csv").exists());
}

#[test]
fn bundled_zachary_runs_without_data() {
    let dir = tempfile::tempdir().unwrap();
    let text = "kind = \"datasets\"\nfamilies = [\"logComm\", \"For\"]\ngrid = 4\n[[tasks]]\ntype = \"dataset\"\nname = \"zachary\"\n";
    let cfg = write_config(dir.path(), "z.cfg", text);
    let o = kernelbench(&["run", &cfg, "--out", "z"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sweep = fs::read_to_string(dir.path().join("z/sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 1 + 2 * 4);
    assert!(dir.path().join("z/ranked_1.svg").is_file());
}

#[test]
fn verify_single_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let o = kernelbench(&["verify", "--only", "A5"], dir.path());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}");
    assert_eq!(stdout.lines().count(), 1);
    assert!(stdout.starts_with("A5 PASS"));

    let o = kernelbench(&["verify", "--only", "nothing"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn committed_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["table1.cfg", "table2.cfg", "fig5.cfg", "table4.cfg"] {
        let c = kernelbench_cli::config::ExperimentConfig::load(&root.join(name)).unwrap();
        let r = c.resolve().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(r.families.len(), 13, "{name}");
    }
}

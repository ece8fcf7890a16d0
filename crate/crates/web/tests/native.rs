use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn coxeter_a3() {
    let v = parse(agt_web::coxeter_explore(r#"{"rank":3,"m":[[1,3,2],[3,1,3],[2,3,1]]}"#, 6));
    assert_eq!(v["order"], "24");
    assert_eq!(v["smallRoots"], 6);
    let counts: Vec<&str> = v["counts"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(counts, ["1", "3", "5", "6", "5", "3", "1"]);
    assert_eq!(v["normalForms"].as_array().unwrap().len(), 24);
}

#[test]
fn coxeter_affine_is_infinite() {
    let v = parse(agt_web::coxeter_explore(r#"{"rank":3,"m":[[1,3,3],[3,1,3],[3,3,1]]}"#, 4));
    assert_eq!(v["order"], "infinite");
    let counts: Vec<&str> = v["counts"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(counts, ["1", "3", "6", "9", "12"]);
}

#[test]
fn normal_forms_and_word_problem() {
    let z2 = r#"{"generators":["a","b"],"relators":["abAB"]}"#;
    let v = parse(agt_web::normal_forms(z2, "baBA ba"));
    assert_eq!(v["forms"][0]["normalForm"], "ε");
    assert_eq!(v["forms"][1]["normalForm"], "ab");
    assert_eq!(v["order"], "infinite");
    assert_eq!(parse(agt_web::word_problem(z2, "ab", "ba"))["equal"], true);
    assert_eq!(parse(agt_web::word_problem(z2, "ab", "b"))["equal"], false);
}

#[test]
fn errors_are_reported_as_json() {
    let v = parse(agt_web::coxeter_explore("{", 3));
    assert!(v["error"].as_str().unwrap().contains("parse"));
    let v = parse(agt_web::normal_forms(r#"{"generators":["a"],"relators":[]}"#, "q"));
    assert!(v["error"].as_str().unwrap().contains("q"));
}

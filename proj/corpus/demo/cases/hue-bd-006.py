import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def group_on(group_id):
    url = f'{BASE}/resource/grouped_light/{group_id}'
    body = {'type': 'light', 'on': {'on': True}}
    resp = requests.put(url, headers=HEADERS, json=body)
    return resp.json()
